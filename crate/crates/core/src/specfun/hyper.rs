//! Pochhammer symbols and the ₂F₃ / ₁F₂ hypergeometric series.

use super::gamma::is_nonpositive_integer;
use crate::error::{Error, Result};

/// Outcome of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult<T = f64> {
    pub value: T,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub converged: bool,
}

/// Stopping rule for series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// A term counts as negligible when |term| ≤ eps·|partial sum|.
    pub eps: f64,
    /// Number of consecutive negligible terms required to stop.
    pub quiet_terms: usize,
    pub max_terms: usize,
    /// `converged` additionally requires the error estimate to be at most
    /// `tol · max(1, |value|)`.
    pub tol: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            eps: 1e-16,
            quiet_terms: 3,
            max_terms: 10_000,
            tol: 1e-12,
        }
    }
}

/// Rising factorial (a)ₙ = a(a+1)…(a+n−1).
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |p, k| p * (a + k as f64))
}

fn hyp_series(upper: &[f64], lower: &[f64], x: f64, opts: &SeriesOptions) -> Result<SeriesResult> {
    if let Some(&b) = lower.iter().find(|&&b| is_nonpositive_integer(b)) {
        return Err(Error::LowerParameterPole(b));
    }
    let mut term = 1.0;
    let mut last = if x == 0.0 { 0.0 } else { 1.0 };
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut quiet = 0;
    let mut n = 0usize;
    let mut stopped = x == 0.0;
    while !stopped && n < opts.max_terms {
        let nf = n as f64;
        let num: f64 = upper.iter().map(|a| a + nf).product();
        let den: f64 = lower.iter().map(|b| b + nf).product::<f64>() * (nf + 1.0);
        term *= num / den * x;
        sum += term;
        last = term;
        abs_sum += term.abs();
        n += 1;
        if term.abs() <= opts.eps * sum.abs() {
            quiet += 1;
            if quiet >= opts.quiet_terms {
                stopped = true;
            }
        } else {
            quiet = 0;
        }
    }
    // truncation: the last retained term bounds the tail once the terms
    // decay factorially; rounding: a few ulps of the largest partial sums
    let rounding = 4.0 * f64::EPSILON * abs_sum;
    let err = if stopped {
        last.abs() + rounding
    } else {
        last.abs() * 10.0 + rounding
    };
    Ok(SeriesResult {
        value: sum,
        abs_error_estimate: err,
        terms_used: n + 1,
        converged: stopped && err <= opts.tol * sum.abs().max(1.0),
    })
}

/// ₂F₃(a1, a2; b1, b2, b3; x) = Σ (a1)ᵥ(a2)ᵥ / ((b1)ᵥ(b2)ᵥ(b3)ᵥ ν!) xᵛ.
pub fn hyp2f3(a1: f64, a2: f64, b1: f64, b2: f64, b3: f64, x: f64) -> Result<SeriesResult> {
    hyp2f3_with(a1, a2, b1, b2, b3, x, &SeriesOptions::default())
}

pub fn hyp2f3_with(a1: f64, a2: f64, b1: f64, b2: f64, b3: f64, x: f64, opts: &SeriesOptions) -> Result<SeriesResult> {
    hyp_series(&[a1, a2], &[b1, b2, b3], x, opts)
}

/// ₁F₂(a; b1, b2; x).
pub fn hyp1f2(a: f64, b1: f64, b2: f64, x: f64) -> Result<SeriesResult> {
    hyp_series(&[a], &[b1, b2], x, &SeriesOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sum_at_zero() {
        let r = hyp2f3(0.3, -1.7, 2.5, 2.0, 3.5, 0.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
    }

    #[test]
    fn lower_parameter_pole_is_error() {
        assert_eq!(
            hyp2f3(1.0, 1.0, -2.0, 2.0, 2.0, 0.5),
            Err(Error::LowerParameterPole(-2.0))
        );
    }

    #[test]
    fn cancelling_parameter_reduces_to_1f2() {
        let x = -3.3;
        let a = hyp2f3(0.75, -1.2, 0.75, 1.5, 2.25, x).unwrap();
        // independent direct summation of ₁F₂(−1.2; 1.5, 2.25; x)
        let mut t = 1.0;
        let mut s = 1.0;
        for n in 0..80 {
            let nf = n as f64;
            t *= (-1.2 + nf) / ((1.5 + nf) * (2.25 + nf) * (nf + 1.0)) * x;
            s += t;
        }
        assert!((a.value - s).abs() < 1e-14);
        assert!((hyp1f2(-1.2, 1.5, 2.25, x).unwrap().value - s).abs() < 1e-14);
    }

    #[test]
    fn terminating_series() {
        // upper parameter −2 makes a quadratic
        let x = 0.7;
        let r = hyp2f3(-2.0, 1.0, 1.0, 1.0, 1.0, x).unwrap();
        let expect = 1.0 - 2.0 * x + x * x / 4.0;
        assert!((r.value - expect).abs() < 1e-15);
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert!((pochhammer(0.5, 3) - 0.5 * 1.5 * 2.5).abs() < 1e-15);
    }
}
