use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::DerivedParams;
use crate::solutions::quartic_roots;

/// Weights for derivatives 0..=max_deriv at z from nodes `xs` (Fornberg's recursion).
/// Row m holds the weights of the m-th derivative.
pub fn fornberg_weights(z: f64, xs: &[f64], max_deriv: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; max_deriv + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    for i in 1..n {
        let mn = i.min(max_deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    /// Stencil half-width; the stencil has 2·half_width + 1 nodes.
    pub half_width: usize,
    /// Step in ln t is rel_step / ω(t).
    pub rel_step: f64,
    pub richardson: bool,
    /// Pick the step from a short geometric ladder around rel_step.
    pub adaptive: bool,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            half_width: 6,
            rel_step: 0.4,
            richardson: true,
            adaptive: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub t: f64,
    /// |R| / scale
    pub residual: f64,
    /// Largest magnitude among the operator's terms (floored).
    pub scale: f64,
}

/// Fastest local rate of change of basis members in ln t, used to size steps.
pub fn natural_frequency(dp: &DerivedParams, t: f64) -> f64 {
    let a1 = dp.alpha1();
    if a1 == 0.0 || dp.k1 == 0.0 {
        let q = quartic_roots(
            crate::params::ratio_to_f64(dp.eta),
            dp.omega1,
            if a1 == 0.0 { dp.k1 } else { 0.0 },
        );
        return q.roots.iter().map(|d| d.norm()).fold(1.0, f64::max);
    }
    let x = dp.x_of_t(t).unwrap_or(0.0);
    let bmax = dp
        .b_star
        .map(|b| b.iter().map(|v| v.abs()).fold(0.0, f64::max))
        .unwrap_or(0.0);
    let amax = match dp.a_star {
        Some(crate::params::AStar::Real(a)) => (a[0] + 1.0).abs().max((a[1] + 1.0).abs()),
        Some(crate::params::AStar::Complex { im, .. }) => im.abs(),
        None => 0.0,
    };
    (a1.abs() * (x.sqrt() + bmax.max(amax))).max(1.0)
}

fn jets_fd<F>(phi: &F, u0: f64, h: f64, half: usize, weights: &[Vec<f64>]) -> Result<[Complex64; 5]>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for i in 0..=2 * half {
        let k = i as f64 - half as f64;
        let t = (u0 + k * h).exp();
        let v = phi(t)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite(t));
        }
        for (m, o) in out.iter_mut().enumerate() {
            *o += v * weights[m][i] / h.powi(m as i32);
        }
    }
    Ok(out)
}

/// Fraction of max |ΔᵐΦ| below which the operator's terms count as vanishing.
pub const SCALE_FLOOR: f64 = 1e-3;

/// Reduced operator applied to a Δ-jet (Φ, ΔΦ, …, Δ⁴Φ) at t; returns
/// (|R| / scale, scale) with scale the largest term magnitude, at least
/// `SCALE_FLOOR` times the largest jet entry.
pub fn reduced_operator(dp: &DerivedParams, t: f64, d: &[Complex64; 5]) -> (f64, f64) {
    let a = dp.a_sq();
    let a1 = dp.alpha1();
    let om = dp.omega1;
    let e = dp.k1 * dp.k1 * t.powf(a1);
    let b1 = e - a;
    // Δ²(e Φ) = e(α₁²Φ + 2α₁ΔΦ + Δ²Φ)
    let d2b = e * (a1 * a1 * d[0] + 2.0 * a1 * d[1] + d[2]) - a * d[2];
    let terms = [
        d[4],
        d2b,
        -(2.0 / 3.0) * (d[2] + b1 * d[0]),
        (2.0 / 3.0) * b1 * om * d[0],
        -a * (d[2] + b1 * d[0]),
        (2.0 / 3.0) * a * om * d[0],
    ];
    let r: Complex64 = terms.iter().sum();
    // on solutions where every term vanishes (constants, ln t when A = 0) the
    // largest term is pure rounding noise, so the scale is floored by a small
    // fraction of the jet itself
    let jet = d.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = terms.iter().map(|v| v.norm()).fold(SCALE_FLOOR * jet, f64::max);
    (if scale > 0.0 { r.norm() / scale } else { 0.0 }, scale)
}

/// Applies the reduced operator
/// Δ⁴Φ + Δ²(b₁Φ) − (2/3)(Δ²Φ + b₁Φ) + (2/3)b₁Ω₁Φ − A(Δ²Φ + b₁Φ) + (2/3)AΩ₁Φ,
/// b₁ = k₁²t^{α₁} − A, A = (2η−1)²/4, by central differences in ln t.
pub fn operator_residual<F>(
    phi: F,
    dp: &DerivedParams,
    t_grid: &[f64],
    opts: &ResidualOptions,
) -> Result<Vec<ResidualPoint>>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let half = opts.half_width.max(2);
    let nodes: Vec<f64> = (0..=2 * half).map(|i| i as f64 - half as f64).collect();
    let w = fornberg_weights(0.0, &nodes, 4);
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
        }
        let u0 = t.ln();
        let h0 = opts.rel_step / natural_frequency(dp, t);
        let d = if !opts.richardson {
            jets_fd(&phi, u0, h0, half, &w)?
        } else {
            // one Richardson level per step; the step is picked among
            // h0·2^k by the smallest change of Δ⁴Φ between h and h/2
            let ks: Vec<i32> = if opts.adaptive {
                (-3..=1).rev().collect()
            } else {
                vec![0, -1]
            };
            // coarse levels may reach outside the evaluator's domain and are
            // then skipped; the finest level must succeed
            let mut levels = Vec::with_capacity(ks.len());
            for (i, &k) in ks.iter().enumerate() {
                let r = jets_fd(&phi, u0, h0 * 2f64.powi(k), half, &w);
                levels.push(if i + 1 == ks.len() { Some(r?) } else { r.ok() });
            }
            let mut best: Option<(f64, [Complex64; 5])> = None;
            for pair in levels.windows(2) {
                let (Some(coarse), Some(fine)) = (&pair[0], &pair[1]) else {
                    continue;
                };
                let est = (coarse[4] - fine[4]).norm();
                let mut d = *fine;
                for m in 1..5 {
                    // central stencil accuracy: 2·half for m ≤ 2, 2·half − 2 for m = 3, 4
                    let p = if m <= 2 { 2 * half } else { 2 * half - 2 };
                    let f = 2f64.powi(p as i32);
                    d[m] = (f * fine[m] - coarse[m]) / (f - 1.0);
                }
                if best.as_ref().is_none_or(|(e, _)| est < *e) {
                    best = Some((est, d));
                }
            }
            best.map(|(_, d)| d).unwrap_or([Complex64::new(0.0, 0.0); 5])
        };
        let (residual, scale) = reduced_operator(dp, t, &d);
        out.push(ResidualPoint { t, residual, scale });
    }
    Ok(out)
}
