use num_complex::Complex64;

use super::poles::enumerate_poles;
use super::{MbIntegrand, Rotation, Side, POLE_TOL};
use crate::error::{Error, Result};
use crate::specfun::{digamma, ln_gamma, polygamma, SeriesResult, ZETA_EVEN};

/// Highest Δ-derivative carried by precomputed jets.
pub const MAX_JET: usize = 4;

/// Smallest x accepted for the descending (right-chain) expansion.
pub const RIGHT_X_MIN: f64 = 1.0;

/// Default number of poles followed per chain.
pub const DEFAULT_CHAIN: usize = 400;

/// One residue: sign · e^{log_abs} · x^{c} · Σ_j poly[j] Lʲ with L = ln x (+ iθ).
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueTerm {
    pub location: f64,
    pub order: u32,
    pub c: f64,
    pub log_abs: f64,
    pub sign: f64,
    pub poly: Vec<f64>,
}

impl ResidueTerm {
    pub fn eval(&self, l: Complex64) -> Complex64 {
        let p = horner(&self.poly, l);
        p * (l * self.c + self.log_abs).exp() * self.sign
    }

    /// Polynomials of Δᵐ(x^c P(L)) = x^c Pₘ(L), with Pₘ₊₁ = c·Pₘ + Pₘ′.
    fn jets(&self) -> Vec<Vec<f64>> {
        let mut out = vec![self.poly.clone()];
        for _ in 0..MAX_JET {
            let p = out.last().unwrap();
            let mut q: Vec<f64> = p.iter().map(|v| v * self.c).collect();
            for (j, v) in p.iter().enumerate().skip(1) {
                q[j - 1] += j as f64 * v;
            }
            out.push(q);
        }
        out
    }
}

fn horner(poly: &[f64], l: Complex64) -> Complex64 {
    poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &p| acc * l + p)
}

/// Laurent data of one gamma factor Γ(c·s + d) near s₀: adds ln|coefficient|,
/// its sign and the log-derivative series g₁..g_K (negated for denominators).
fn gamma_factor_expansion(
    slope: f64,
    z0: f64,
    pole: Option<u64>,
    g: &mut [f64],
    log_abs: &mut f64,
    sign: &mut f64,
    invert: bool,
) -> Result<()> {
    let k = g.len();
    let inv = if invert { -1.0 } else { 1.0 };
    let mut fact = 1.0;
    match pole {
        None => {
            let (lg, sg) = ln_gamma(z0)?;
            *log_abs += inv * lg;
            *sign *= sg;
            for m in 1..=k {
                fact *= m as f64;
                let psi = if m == 1 {
                    digamma(z0)?
                } else {
                    polygamma(m as u32 - 1, z0)?
                };
                g[m - 1] += inv * psi * slope.powi(m as i32) / fact;
            }
        }
        Some(n) => {
            // Γ(−n + δ) = (−1)ⁿ/(n! δ) · exp(Σ ((−1)ᵐζ(m) + Hₙ⁽ᵐ⁾) δᵐ/m), δ = c·ε
            let (lg, _) = ln_gamma(n as f64 + 1.0)?;
            *log_abs -= inv * lg;
            *sign *= if n % 2 == 0 { slope } else { -slope };
            let n1 = n as f64 + 1.0;
            for m in 1..=k {
                fact *= m as f64;
                let psi = if m == 1 {
                    digamma(n1)?
                } else {
                    polygamma(m as u32 - 1, n1)?
                };
                let mut v = -psi * (-slope).powi(m as i32) / fact;
                if m % 2 == 0 {
                    v += ZETA_EVEN[m / 2 - 1] * slope.powi(m as i32) / (m / 2) as f64;
                }
                g[m - 1] += inv * v;
            }
        }
    }
    Ok(())
}

/// Residue of `ib` at `s0`, a pole of order `order`, as a polynomial in L.
pub fn laurent_residue(ib: &MbIntegrand, s0: f64, order: u32) -> Result<ResidueTerm> {
    let k = order as usize;
    if k == 0 || k > 2 * ZETA_EVEN.len() {
        return Err(Error::InvalidParameter(format!(
            "unsupported pole order {order} at s = {s0}"
        )));
    }
    let mut g = vec![0.0; k.saturating_sub(1)];
    let mut log_abs = ib.scale.abs().ln();
    let mut sign = ib.scale.signum();
    for (fs, invert) in [(&ib.num, false), (&ib.den, true)] {
        for f in fs {
            let pole = f.pole_index(s0);
            let z0 = match pole {
                Some(n) => -(n as f64),
                None => f.arg(s0),
            };
            gamma_factor_expansion(f.slope as f64, z0, pole, &mut g, &mut log_abs, &mut sign, invert)?;
        }
    }
    for r in &ib.rational {
        let d = s0 - r.root;
        if d.abs() < POLE_TOL {
            continue;
        }
        let p = r.power as f64;
        log_abs += p * d.abs().ln();
        if d < 0.0 && r.power % 2 != 0 {
            sign = -sign;
        }
        for (m, gm) in g.iter_mut().enumerate() {
            let m = m as i32 + 1;
            *gm += p * if m % 2 == 1 { 1.0 } else { -1.0 } / (m as f64 * d.powi(m));
        }
    }
    // h = exp(Σ gₘ εᵐ)
    let mut h = vec![1.0; k];
    for n in 1..k {
        h[n] = (1..=n).map(|m| m as f64 * g[m - 1] * h[n - m]).sum::<f64>() / n as f64;
    }
    // coefficient of ε^{k−1} in h(ε)·e^{−εL}
    let mut poly = Vec::with_capacity(k);
    let mut fact = 1.0;
    for j in 0..k {
        if j > 0 {
            fact *= j as f64;
        }
        let s = if j % 2 == 0 { 1.0 } else { -1.0 };
        poly.push(s * h[k - 1 - j] / fact);
    }
    if !log_abs.is_finite() && log_abs != f64::NEG_INFINITY {
        return Err(Error::NonFinite(s0));
    }
    Ok(ResidueTerm {
        location: s0,
        order,
        c: -s0,
        log_abs,
        sign,
        poly,
    })
}

#[derive(Debug, Clone)]
struct Entry {
    term: ResidueTerm,
    jets: Vec<Vec<f64>>,
}

/// Precomputed residues of one side of an integrand, grouped by pole class.
/// The series value already carries the orientation sign (+ left, − right).
#[derive(Debug, Clone)]
pub struct ResidueSeries {
    pub side: Side,
    pub rotation: Rotation,
    groups: Vec<Vec<Entry>>,
}

impl ResidueSeries {
    pub fn new(ib: &MbIntegrand, side: Side, max_chain: usize) -> Result<Self> {
        let poles = enumerate_poles(ib, side, max_chain)?;
        let orient = match side {
            Side::Left => 1.0,
            Side::Right => -1.0,
        };
        let n_class = poles.iter().map(|p| p.class + 1).max().unwrap_or(0);
        let mut groups: Vec<Vec<Entry>> = vec![Vec::new(); n_class];
        for p in &poles {
            let mut term = laurent_residue(ib, p.location, p.order)?;
            term.sign *= orient;
            let jets = term.jets();
            groups[p.class].push(Entry { term, jets });
        }
        groups.retain(|g| !g.is_empty());
        Ok(Self {
            side,
            rotation: ib.rotation,
            groups,
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = &ResidueTerm> {
        self.groups.iter().flatten().map(|e| &e.term)
    }

    /// Highest power of ln x appearing in any residue.
    pub fn max_log_power(&self) -> usize {
        self.terms().map(|t| t.poly.len() - 1).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64, tol: f64) -> Result<SeriesResult<Complex64>> {
        Ok(self.eval_jets(x, 0, tol)?.remove(0))
    }

    /// Δᵐ of the series at x for m = 0..=n, Δ = x d/dx.
    pub fn eval_jets(&self, x: f64, n: usize, tol: f64) -> Result<Vec<SeriesResult<Complex64>>> {
        if n > MAX_JET {
            return Err(Error::InvalidParameter(format!("jet order {n} exceeds {MAX_JET}")));
        }
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::InvalidParameter(format!("x = {x} must be positive and finite")));
        }
        if self.side == Side::Right && x < RIGHT_X_MIN {
            return Err(Error::OutsideConvergence {
                x,
                direction: "right",
                hint: format!("descending expansion needs x >= {RIGHT_X_MIN}; use the left (ascending) series"),
            });
        }
        let l = Complex64::new(x.ln(), self.rotation.theta());
        let mut out = vec![
            SeriesResult {
                value: Complex64::new(0.0, 0.0),
                abs_error_estimate: 0.0,
                terms_used: 0,
                converged: true,
            };
            n + 1
        ];
        for group in &self.groups {
            let r = match self.side {
                Side::Left => sum_convergent(group, l, n),
                Side::Right => sum_asymptotic(group, l, n),
            };
            for (o, g) in out.iter_mut().zip(r) {
                o.value += g.value;
                o.abs_error_estimate += g.abs_error_estimate;
                o.terms_used += g.terms_used;
                o.converged &= g.converged;
            }
        }
        for o in &mut out {
            o.converged &= o.abs_error_estimate <= tol * o.value.norm().max(1.0);
        }
        Ok(out)
    }
}

impl ResidueSeries {
    /// Sum over the residues at start, start ∓ 1, start ∓ 2, … only (one pole chain).
    pub fn eval_chain(&self, start: f64, x: f64, tol: f64) -> Result<SeriesResult<Complex64>> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::InvalidParameter(format!("x = {x} must be positive and finite")));
        }
        let dir = match self.side {
            Side::Left => 1.0,
            Side::Right => -1.0,
        };
        let chain: Vec<Entry> = self
            .groups
            .iter()
            .flatten()
            .filter(|e| {
                let k = dir * (start - e.term.location);
                k > -POLE_TOL && (k - k.round()).abs() < POLE_TOL
            })
            .cloned()
            .collect();
        let l = Complex64::new(x.ln(), self.rotation.theta());
        let mut r = match self.side {
            Side::Left => sum_convergent(&chain, l, 0),
            Side::Right => sum_asymptotic(&chain, l, 0),
        }
        .remove(0);
        r.converged &= r.abs_error_estimate <= tol * r.value.norm().max(1.0);
        Ok(r)
    }
}

fn term_values(e: &Entry, l: Complex64, n: usize) -> Vec<Complex64> {
    let base = (l * e.term.c + e.term.log_abs).exp() * e.term.sign;
    e.jets[..=n].iter().map(|p| horner(p, l) * base).collect()
}

const QUIET: usize = 3;
const EPS: f64 = 1e-16;

fn sum_convergent(group: &[Entry], l: Complex64, n: usize) -> Vec<SeriesResult<Complex64>> {
    let mut sum = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut abs = vec![0.0; n + 1];
    let mut prev = vec![f64::INFINITY; n + 1];
    let mut last = vec![0.0; n + 1];
    let mut quiet = 0;
    let mut used = 0;
    for e in group {
        let t = term_values(e, l, n);
        used += 1;
        let mut small = true;
        for m in 0..=n {
            let a = t[m].norm();
            sum[m] += t[m];
            abs[m] += a;
            small &= a <= EPS * sum[m].norm() && a <= prev[m];
            prev[m] = a;
            last[m] = a;
        }
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= QUIET {
            break;
        }
    }
    let stopped = quiet >= QUIET;
    (0..=n)
        .map(|m| SeriesResult {
            value: sum[m],
            abs_error_estimate: if stopped { last[m] } else { 10.0 * last[m] } + 4.0 * f64::EPSILON * abs[m],
            terms_used: used,
            converged: stopped,
        })
        .collect()
}

/// Optimal truncation: stop before the terms start growing again.
fn sum_asymptotic(group: &[Entry], l: Complex64, n: usize) -> Vec<SeriesResult<Complex64>> {
    let mut sum = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut abs = 0.0;
    let mut prev = f64::INFINITY;
    let mut used = 0;
    let mut err = f64::INFINITY;
    let mut quiet = 0;
    for e in group {
        let t = term_values(e, l, n);
        let a = t.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if a > prev && used > 0 {
            err = prev;
            break;
        }
        for m in 0..=n {
            sum[m] += t[m];
        }
        abs += a;
        used += 1;
        prev = a;
        let scale = sum.iter().map(|v| v.norm()).fold(0.0, f64::max);
        quiet = if a <= EPS * scale { quiet + 1 } else { 0 };
        if quiet >= QUIET {
            err = a;
            break;
        }
    }
    if err.is_infinite() {
        err = prev;
    }
    let err = err + 4.0 * f64::EPSILON * abs;
    (0..=n)
        .map(|m| SeriesResult {
            value: sum[m],
            abs_error_estimate: err,
            terms_used: used,
            converged: err.is_finite(),
        })
        .collect()
}

/// Sum of residues of `ib` on `side` at x (left: ascending series, right:
/// descending expansion with the orientation sign applied).
pub fn residue_sum(ib: &MbIntegrand, side: Side, x: f64, tol: f64) -> Result<SeriesResult<Complex64>> {
    ResidueSeries::new(ib, side, DEFAULT_CHAIN)?.eval(x, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mb::GammaFactor;
    use crate::specfun::hyp1f2;

    #[test]
    fn simple_pole_identity() {
        // Γ(s)/Γ(1+s) = 1/s: residue 1 at 0 and nothing else
        let ib = MbIntegrand::new(vec![GammaFactor::plus(0.0)], vec![GammaFactor::plus(1.0)]);
        let r = residue_sum(&ib, Side::Left, 2.0, 1e-14).unwrap();
        assert!((r.value - 1.0).norm() < 1e-15);
    }

    #[test]
    fn exponential_from_gamma() {
        // Σ Res Γ(s) x^{−s} = e^{−x}
        let ib = MbIntegrand::new(vec![GammaFactor::plus(0.0)], vec![]);
        for x in [0.1, 1.0, 7.5] {
            let r = residue_sum(&ib, Side::Left, x, 1e-10).unwrap();
            assert!((r.value.re - (-x).exp()).abs() <= r.abs_error_estimate, "{x}");
            assert!(r.converged);
        }
    }

    #[test]
    fn double_pole_bessel_k0() {
        // Σ Res Γ(s)² x^{−s} = 2 K₀(2√x); K₀(2) = 0.11389387274953344
        let ib = MbIntegrand::new(vec![GammaFactor::plus(0.0), GammaFactor::plus(0.0)], vec![]);
        let r = residue_sum(&ib, Side::Left, 1.0, 1e-12).unwrap();
        assert!((r.value.re - 2.0 * 0.113_893_872_749_533_44).abs() < 1e-14);
    }

    #[test]
    fn triple_pole_matches_perturbed_simple_poles() {
        // Γ(s)Γ(s+ε)Γ(s+2ε) at small ε tends to the order-3 sum
        let x = 0.7;
        let exact = MbIntegrand::new(vec![GammaFactor::plus(0.0); 3], vec![]);
        let v0 = residue_sum(&exact, Side::Left, x, 1e-12).unwrap().value.re;
        let pert = |e: f64| {
            let ib = MbIntegrand::new(
                vec![GammaFactor::plus(0.0), GammaFactor::plus(e), GammaFactor::plus(2.0 * e)],
                vec![],
            );
            residue_sum(&ib, Side::Left, x, 1e-12).unwrap().value.re
        };
        // O(ε) error; one Richardson step removes it
        let (a, b) = (pert(2e-3), pert(1e-3));
        let rich = 2.0 * b - a;
        assert!((rich - v0).abs() < 1e-5 * v0.abs(), "{rich} vs {v0}");
    }

    #[test]
    fn single_chain_is_hypergeometric() {
        let (b, a, c) = (0.3, 0.45, -0.2);
        let ib = MbIntegrand::new(
            vec![GammaFactor::plus(b), GammaFactor::minus(-a)],
            vec![GammaFactor::minus(1.0 - c), GammaFactor::minus(1.5 - c)],
        );
        let x = 1.3;
        let r = residue_sum(&ib, Side::Left, x, 1e-12).unwrap();
        // residue at s = −b−ν: (−1)ᵛ/ν! Γ(b−a+ν)/(Γ(1−c+b+ν)Γ(1.5−c+b+ν)) x^{b+ν}
        let g = |z: f64| crate::specfun::gamma(z).unwrap();
        let pref = g(b - a) / (g(1.0 - c + b) * g(1.5 - c + b)) * x.powf(b);
        let f = hyp1f2(b - a, 1.0 - c + b, 1.5 - c + b, -x).unwrap().value;
        let expect = pref * f;
        assert!(
            (r.value.re - expect).abs() < 1e-13 * expect.abs(),
            "{} vs {expect}",
            r.value.re
        );
    }

    #[test]
    fn right_side_needs_large_x() {
        let ib = MbIntegrand::new(vec![GammaFactor::plus(0.0), GammaFactor::minus(0.5)], vec![]);
        assert!(matches!(
            residue_sum(&ib, Side::Right, 0.5, 1e-8),
            Err(Error::OutsideConvergence { .. })
        ));
    }

    #[test]
    fn jets_are_delta_derivatives() {
        let ib = MbIntegrand::new(
            vec![GammaFactor::plus(0.3), GammaFactor::plus(0.3)],
            vec![GammaFactor::plus(1.1)],
        );
        let s = ResidueSeries::new(&ib, Side::Left, 200).unwrap();
        let x = 0.8;
        let j = s.eval_jets(x, 2, 1e-12).unwrap();
        let h = 1e-4;
        let f = |u: f64| s.eval(u.exp(), 1e-12).unwrap().value.re;
        let u = x.ln();
        let d1 = (f(u + h) - f(u - h)) / (2.0 * h);
        let d2 = (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
        assert!((j[1].value.re - d1).abs() < 1e-7 * d1.abs().max(1.0));
        assert!((j[2].value.re - d2).abs() < 1e-5 * d2.abs().max(1.0));
    }
}
