use num_complex::Complex64;

use super::poles::enumerate_poles;
use super::{MbIntegrand, Side};
use crate::error::{Error, Result};
use crate::specfun::{ln_gamma_complex, SeriesResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Relative accuracy goal.
    pub tol: f64,
    /// Trapezoid points on each pole circle.
    pub circle_points: usize,
    /// Algebraic decay exponent required along the line when the
    /// exponential rate vanishes on one side.
    pub target_power: f64,
    /// Minimum clearance between the line and any pole.
    pub clearance: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            circle_points: 64,
            target_power: -10.0,
            clearance: 0.1,
        }
    }
}

/// log of the integrand at complex s for L = ln x + iθ (without the scale sign).
fn ln_integrand(ib: &MbIntegrand, s: Complex64, l: Complex64) -> Complex64 {
    let mut acc = Complex64::new(ib.scale.abs().ln(), 0.0) - s * l;
    for g in &ib.num {
        acc += ln_gamma_complex(s * g.slope as f64 + g.offset);
    }
    for g in &ib.den {
        acc -= ln_gamma_complex(s * g.slope as f64 + g.offset);
    }
    for r in &ib.rational {
        acc += (s - r.root).ln() * r.power as f64;
    }
    acc
}

fn integrand(ib: &MbIntegrand, s: Complex64, l: Complex64) -> Complex64 {
    ln_integrand(ib, s, l).exp() * ib.scale.signum()
}

// Gauss–Kronrod 7/15 on [−1, 1]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

fn adaptive<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64, abs_tol: f64, depth: u32) -> (Complex64, f64) {
    let (v, e) = gk15(f, a, b);
    if e <= abs_tol || depth == 0 {
        return (v, e);
    }
    let m = 0.5 * (a + b);
    let (v1, e1) = adaptive(f, a, m, 0.5 * abs_tol, depth - 1);
    let (v2, e2) = adaptive(f, m, b, 0.5 * abs_tol, depth - 1);
    (v1 + v2, e1 + e2)
}

struct Layout {
    sigma: f64,
    left: Vec<f64>,
    right: Vec<f64>,
}

fn choose_layout(ib: &MbIntegrand, shift: Option<f64>, opts: &QuadOptions) -> Result<Layout> {
    const CHAIN: usize = 60;
    let left: Vec<f64> = enumerate_poles(ib, Side::Left, CHAIN)?
        .iter()
        .map(|p| p.location)
        .collect();
    let right: Vec<f64> = enumerate_poles(ib, Side::Right, CHAIN)?
        .iter()
        .map(|p| p.location)
        .collect();
    let (ep, em) = ib.decay_rates();
    if ep < -1e-12 || em < -1e-12 {
        return Err(Error::InsufficientDecay(format!(
            "exponential growth along the line (rates {ep:.3}, {em:.3})"
        )));
    }
    let algebraic = ep < 1e-9 || em < 1e-9;
    let nearest = |s: f64| {
        left.iter()
            .chain(&right)
            .map(|p| (p - s).abs())
            .fold(f64::INFINITY, f64::min)
    };
    let circles = |s: f64| left.iter().filter(|&&p| p > s).count() + right.iter().filter(|&&p| p < s).count();

    if let Some(s) = shift {
        let d = nearest(s);
        if d < 1e-3 {
            let pole = left
                .iter()
                .chain(&right)
                .copied()
                .min_by(|a, b| (a - s).abs().partial_cmp(&(b - s).abs()).unwrap())
                .unwrap();
            return Err(Error::ContourOnPole { shift: s, pole });
        }
        if algebraic && ib.algebraic_power(s) > -2.0 {
            return Err(Error::InsufficientDecay(format!(
                "only |Im s|^{:.2} decay at Re s = {s}",
                ib.algebraic_power(s)
            )));
        }
        return Ok(Layout { sigma: s, left, right });
    }

    // fewest circles, then most clearance (up to 1/2), then closest to 0
    let mut best: Option<((usize, f64, f64), f64)> = None;
    for i in -480..=480 {
        let s = i as f64 * 0.025;
        let d = nearest(s);
        if d < opts.clearance {
            continue;
        }
        if algebraic && ib.algebraic_power(s) > opts.target_power {
            continue;
        }
        let key = (circles(s), -d.min(0.5), s.abs());
        if best.map_or(true, |(k, _)| key < k) {
            best = Some((key, s));
        }
    }
    let (_, sigma) =
        best.ok_or_else(|| Error::InsufficientDecay("no admissible vertical contour in [-12, 12]".into()))?;
    Ok(Layout { sigma, left, right })
}

/// Numerical value of (1/2πi)∫_L integrand ds: the vertical line Re s = σ
/// plus small circles that move poles onto the side required by the chain
/// they belong to.
pub fn contour_quadrature(
    ib: &MbIntegrand,
    x: f64,
    contour_shift: Option<f64>,
    opts: &QuadOptions,
) -> Result<SeriesResult<Complex64>> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("x = {x} must be positive and finite")));
    }
    let lay = choose_layout(ib, contour_shift, opts)?;
    let sigma = lay.sigma;
    let l = Complex64::new(x.ln(), ib.rotation.theta());
    let (ep, em) = ib.decay_rates();
    let power = ib.algebraic_power(sigma);
    let mut evals = 0usize;

    let mut f = |tau: f64| {
        evals += 2;
        integrand(ib, Complex64::new(sigma, tau), l) + integrand(ib, Complex64::new(sigma, -tau), l)
    };
    let tail = |tau: f64, rate: f64, mag: f64| {
        if rate > 1e-9 {
            mag / rate
        } else {
            mag * tau / (-power - 1.0)
        }
    };

    let mut peak: f64 = 0.0;
    for i in 0..=40 {
        let t = i as f64 * 0.25;
        peak = peak.max(integrand(ib, Complex64::new(sigma, t), l).norm());
        peak = peak.max(integrand(ib, Complex64::new(sigma, -t), l).norm());
    }
    if !peak.is_finite() || peak == 0.0 {
        return Err(Error::NonFinite(sigma));
    }

    let mut run = |abs_tol: f64| -> Result<(Complex64, f64)> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut a: f64 = 0.0;
        loop {
            let w = (0.25 * a).clamp(1.0, 4.0);
            let b = a + w;
            let (v, e) = adaptive(&mut f, a, b, abs_tol, 40);
            total += v;
            err += e;
            a = b;
            let mp = integrand(ib, Complex64::new(sigma, a), l).norm();
            let mm = integrand(ib, Complex64::new(sigma, -a), l).norm();
            let t = tail(a, ep, mp) + tail(a, em, mm);
            if a > 4.0 && (t <= 1e-18 * peak || t <= 1e-3 * opts.tol * total.norm()) {
                err += t;
                break;
            }
            if a > 1e4 {
                return Err(Error::InsufficientDecay(format!(
                    "integrand still {t:e} at |Im s| = {a}"
                )));
            }
        }
        Ok((total, err))
    };
    let (mut line, mut line_err) = run(1e-3 * opts.tol * peak)?;
    if line.norm() < 1e-2 * peak {
        let refined = run(1e-3 * opts.tol * line.norm().max(1e-300))?;
        line = refined.0;
        line_err = refined.1;
    }
    let inv2pi = 1.0 / (2.0 * std::f64::consts::PI);
    let mut value = line * inv2pi;
    let mut err = line_err * inv2pi;

    let all: Vec<f64> = lay.left.iter().chain(&lay.right).copied().collect();
    let mut circle = |p: f64| -> (Complex64, f64) {
        let other = all
            .iter()
            .filter(|&&q| (q - p).abs() > 1e-9)
            .map(|q| (q - p).abs())
            .fold(f64::INFINITY, f64::min);
        let r = 0.3f64.min(0.4 * other).min(0.5 * (p - sigma).abs());
        let ratio = r / other.min(2.0 * (p - sigma).abs());
        let n = if ratio > 0.5 {
            2 * opts.circle_points
        } else {
            opts.circle_points
        };
        let trap = |n: usize| {
            (0..n)
                .map(|k| {
                    let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
                    integrand(ib, z + p, l) * z
                })
                .sum::<Complex64>()
                / n as f64
        };
        let full = trap(n);
        let half = trap(n / 2);
        evals += n + n / 2;
        (full, (full - half).norm() * ratio.powi((n / 2) as i32))
    };
    for &p in lay.left.iter().filter(|&&p| p > sigma) {
        let (v, e) = circle(p);
        value += v;
        err += e;
    }
    for &p in lay.right.iter().filter(|&&p| p < sigma) {
        let (v, e) = circle(p);
        value -= v;
        err += e;
    }
    Ok(SeriesResult {
        value,
        abs_error_estimate: err,
        terms_used: evals,
        converged: err <= opts.tol * value.norm().max(1.0),
    })
}
