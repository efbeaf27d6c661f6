//! Gamma and log-gamma for real and complex arguments.
//!
//! Real and complex evaluations share one Lanczos coefficient set (g = 7,
//! nine terms), combined with the reflection formula left of Re z = 1/2.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

/// Lanczos coefficients for g = 7, n = 9.
pub(crate) const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `true` for 0, −1, −2, …
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// sin(πx) with exact argument reduction.
pub fn sin_pi(x: f64) -> f64 {
    let y = x.rem_euclid(2.0);
    let n = (2.0 * y).round();
    let f = y - 0.5 * n;
    match n as i64 % 4 {
        0 => (PI * f).sin(),
        1 => (PI * f).cos(),
        2 => -(PI * f).sin(),
        _ => -(PI * f).cos(),
    }
}

/// cos(πx) with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    let y = x.rem_euclid(2.0);
    let n = (2.0 * y).round();
    let f = y - 0.5 * n;
    match n as i64 % 4 {
        0 => (PI * f).cos(),
        1 => -(PI * f).sin(),
        2 => -(PI * f).cos(),
        _ => (PI * f).sin(),
    }
}

fn lanczos_sum(z: f64) -> f64 {
    let mut t = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        t += c / (z + i as f64);
    }
    t
}

/// Γ(x) for real x.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Ok(f64::NAN);
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x == x.round() && x <= 171.0 {
        let mut p = 1.0;
        let mut k = 2.0;
        while k < x {
            p *= k;
            k += 1.0;
        }
        return Ok(p);
    }
    if x < 0.5 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    if x > 171.7 {
        return Ok(f64::INFINITY);
    }
    let z = x - 1.0;
    let w = z + LANCZOS_G + 0.5;
    // split the power to delay overflow near the top of the range
    let p = w.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * p * (p * (-w).exp()) * lanczos_sum(z))
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let (lg, sg) = ln_gamma(1.0 - x)?;
        return Ok(((PI / s.abs()).ln() - lg, s.signum() * sg));
    }
    let z = x - 1.0;
    let w = z + LANCZOS_G + 0.5;
    Ok((LN_SQRT_2PI + (z + 0.5) * w.ln() - w + lanczos_sum(z).ln(), 1.0))
}

/// ln sin(πz) for complex z, stable for large |Im z|.
///
/// The imaginary part is only defined modulo 2π.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    // e^{±2iπz} with the real part of z reduced exactly
    let two_x = 2.0 * z.re;
    if z.im >= 0.0 {
        let damp = (-2.0 * PI * z.im).exp();
        let w = Complex64::new(cos_pi(two_x) * damp, sin_pi(two_x) * damp);
        // sin(πz) = e^{-iπz} (1 - e^{2iπz}) / (-2i)
        Complex64::new(PI * z.im - std::f64::consts::LN_2, -PI * z.re + 0.5 * PI) + (Complex64::new(1.0, 0.0) - w).ln()
    } else {
        let damp = (2.0 * PI * z.im).exp();
        let w = Complex64::new(cos_pi(two_x) * damp, -sin_pi(two_x) * damp);
        // sin(πz) = e^{iπz} (1 - e^{-2iπz}) / (2i)
        Complex64::new(-PI * z.im - std::f64::consts::LN_2, PI * z.re - 0.5 * PI) + (Complex64::new(1.0, 0.0) - w).ln()
    }
}

/// ln Γ(z) for complex z off the poles. The branch is not the principal
/// one; only exp of the result (or sums of such logs) is meaningful.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_complex(one - z);
    }
    let zm = z - 1.0;
    let mut t = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        t += *c / (zm + i as f64);
    }
    let w = zm + (LANCZOS_G + 0.5);
    (zm + 0.5) * w.ln() - w + t.ln() + LN_SQRT_2PI
}

/// Γ(z) for complex z.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::GammaPole(z.re));
    }
    if z.im == 0.0 {
        return Ok(Complex64::new(gamma(z.re)?, 0.0));
    }
    Ok(ln_gamma_complex(z).exp())
}
