//! Digamma and polygamma functions.

use std::f64::consts::PI;

use super::gamma::{cos_pi, is_nonpositive_integer, sin_pi};
use crate::error::{Error, Result};

/// B₂, B₄, …, B₁₆.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// ψ(x) = Γ′(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.0 {
        // ψ(x) = ψ(1 − x) − π cot(πx)
        return Ok(digamma(1.0 - x)? - PI * cos_pi(x) / sin_pi(x));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pw = inv2;
    let mut tail = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        tail += b / (2.0 * (k + 1) as f64) * pw;
        pw *= inv2;
    }
    Ok(acc + x.ln() - 0.5 / x - tail)
}

/// ψ⁽ⁿ⁾(x), the n-th derivative of the digamma function. `n = 0` is ψ itself.
pub fn polygamma(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return digamma(x);
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    let nf = n as f64;
    // ψ⁽ⁿ⁾(x) = (−1)ⁿ⁺¹ n! Σₖ (x+k)^−(n+1); shift x up, then use the
    // asymptotic expansion of the remaining tail.
    let mut x = x;
    let mut head = 0.0;
    while x < 15.0 {
        head += x.powi(-(n as i32 + 1));
        x += 1.0;
    }
    let mut tail = 1.0 / (nf * x.powf(nf)) + 0.5 / x.powf(nf + 1.0);
    // coefficient (2k + n − 1)! / ((2k)! n!) built incrementally
    let mut coef = 1.0;
    let mut pw = x.powf(-nf);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let kk = 2 * (k + 1);
        // from (2k−2+n−1)!/((2k−2)! n!) to (2k+n−1)!/((2k)! n!)
        let lo = (kk - 2) as f64;
        coef *= if k == 0 {
            // (n+1)! / (2! n!) = (n+1)/2
            (nf + 1.0) / 2.0
        } else {
            (lo + nf) * (lo + nf + 1.0) / ((lo + 1.0) * (lo + 2.0))
        };
        pw /= x * x;
        tail += b * coef * pw;
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * fact * (head + tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn digamma_identities() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-15);
        let z = 3.7;
        let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap();
        assert!((d - 1.0 / z).abs() < 1e-13);
        // ψ(1/2) = −γ − 2 ln 2
        let h = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5).unwrap() - h).abs() < 1e-14);
        // reflection on the negative axis
        let x = -2.3;
        let r = digamma(1.0 - x).unwrap() - PI / (PI * x).tan();
        assert!((digamma(x).unwrap() - r).abs() < 1e-12 * r.abs());
        assert!(digamma(-4.0).is_err());
    }

    #[test]
    fn trigamma_and_higher() {
        assert!((polygamma(1, 1.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        // ψ″(1) = −2ζ(3)
        let zeta3 = 1.202_056_903_159_594_3;
        assert!((polygamma(2, 1.0).unwrap() + 2.0 * zeta3).abs() < 1e-13);
        // ψ‴(1) = 6ζ(4) = π⁴/15
        assert!((polygamma(3, 1.0).unwrap() - PI.powi(4) / 15.0).abs() < 1e-12);
        // ψ′(1/2) = π²/2
        assert!((polygamma(1, 0.5).unwrap() - PI * PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn polygamma_recurrence_on_negative_axis() {
        for &x in &[-7.25, -1.5, -0.3, 2.75, 30.2] {
            for n in 1..4u32 {
                let lhs = polygamma(n, x + 1.0).unwrap() - polygamma(n, x).unwrap();
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let rhs = sign * fact / x.powi(n as i32 + 1);
                assert!(
                    (lhs - rhs).abs() < 1e-11 * rhs.abs().max(polygamma(n, x).unwrap().abs()),
                    "n = {n}, x = {x}"
                );
            }
        }
    }
}
