//! Four-dimensional solution bases for Φ₁ in each regime, the map back to
//! δ = t^α Φ, and coefficient fitting against initial jets.

mod analytic;
mod bases;
mod quartic;

pub use analytic::{primary_set, AnalyticSolution, Segment};
pub use bases::{
    basis_finite_t, basis_near_inf, basis_power_law, class_members, finite_t_kernels, near_inf_kernels, ClassMember,
};
pub use quartic::{quartic_roots, QuarticRoots};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mb::ResidueSeries;
use crate::params::{DerivedParams, Regime};

/// Finite-t residue bases are trusted up to this x.
pub const FINITE_T_X_MAX: f64 = 5.0;
/// Near-∞ bases are used from this x on.
pub const NEAR_INF_X_MIN: f64 = 1.0;
/// Beyond this x the ascending series behind the near-∞ basis lose too many
/// digits to cancellation.
pub const NEAR_INF_X_MAX: f64 = 8.0;
/// Default point where an analytic solution hands over between bases.
pub const X_SWITCH: f64 = 2.0;
/// Condition number above which a fit is reported as ill-conditioned.
pub const COND_WARN: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    PowerLaw,
    FiniteT,
    NearInf,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PowerLaw => "power_law",
            Family::FiniteT => "finite_t",
            Family::NearInf => "near_inf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extract {
    Full,
    Re,
    Im,
}

#[derive(Debug, Clone)]
enum Repr {
    /// t^d (ln t)^k
    Power { d: Complex64, log_power: u32 },
    Series {
        series: Box<ResidueSeries>,
        extract: Extract,
        alpha1: f64,
        k1: f64,
    },
}

#[derive(Debug, Clone)]
pub struct BasisSolution {
    pub label: String,
    pub family: Family,
    /// Whether ln x (or ln t) powers appear.
    pub log_terms: bool,
    /// Recommended x-range (t-range for power laws is all t > 0).
    pub x_range: (f64, f64),
    repr: Repr,
}

/// Value and error estimate of Δᵐ Φ, Δ = t d/dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetValue {
    pub value: Complex64,
    pub err: f64,
}

impl BasisSolution {
    pub(crate) fn power(label: String, d: Complex64, log_power: u32) -> Self {
        Self {
            label,
            family: Family::PowerLaw,
            log_terms: log_power > 0,
            x_range: (0.0, f64::INFINITY),
            repr: Repr::Power { d, log_power },
        }
    }

    pub(crate) fn series(
        label: String,
        family: Family,
        series: ResidueSeries,
        extract: Extract,
        dp: &DerivedParams,
        x_range: (f64, f64),
    ) -> Self {
        Self {
            label,
            family,
            log_terms: series.max_log_power() > 0,
            x_range,
            repr: Repr::Series {
                series: Box::new(series),
                extract,
                alpha1: dp.alpha1(),
                k1: dp.k1,
            },
        }
    }

    /// Exponent d for power-law members.
    pub fn exponent(&self) -> Option<(Complex64, u32)> {
        match self.repr {
            Repr::Power { d, log_power } => Some((d, log_power)),
            Repr::Series { .. } => None,
        }
    }

    pub fn x_of_t(&self, t: f64) -> Option<f64> {
        match &self.repr {
            Repr::Power { .. } => None,
            Repr::Series { alpha1, k1, .. } => Some(k1 * k1 * t.powf(*alpha1) / (alpha1 * alpha1)),
        }
    }

    pub fn in_validity(&self, t: f64) -> bool {
        match self.x_of_t(t) {
            None => t > 0.0,
            Some(x) => x >= self.x_range.0 && x <= self.x_range.1,
        }
    }

    /// Δᵐ Φ(t) for m = 0..=n, without validity checks.
    pub fn jets(&self, t: f64, n: usize) -> Result<Vec<JetValue>> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
        }
        let out = match &self.repr {
            Repr::Power { d, log_power } => {
                let u = t.ln();
                let mut poly = vec![Complex64::new(0.0, 0.0); *log_power as usize + 1];
                poly[*log_power as usize] = Complex64::new(1.0, 0.0);
                let base = (d * u).exp();
                let mut out = Vec::with_capacity(n + 1);
                for _ in 0..=n {
                    let v = poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, p| acc * u + p);
                    out.push(JetValue {
                        value: v * base,
                        err: 0.0,
                    });
                    let mut next: Vec<Complex64> = poly.iter().map(|p| p * d).collect();
                    for j in 1..poly.len() {
                        next[j - 1] += poly[j] * j as f64;
                    }
                    poly = next;
                }
                out
            }
            Repr::Series {
                series,
                extract,
                alpha1,
                k1,
            } => {
                let x = k1 * k1 * t.powf(*alpha1) / (alpha1 * alpha1);
                let js = series.eval_jets(x, n, 1e-12)?;
                js.iter()
                    .enumerate()
                    .map(|(m, r)| {
                        let f = alpha1.powi(m as i32);
                        let v = r.value * f;
                        let value = match extract {
                            Extract::Full => v,
                            Extract::Re => Complex64::new(v.re, 0.0),
                            Extract::Im => Complex64::new(v.im, 0.0),
                        };
                        JetValue {
                            value,
                            err: r.abs_error_estimate * f.abs(),
                        }
                    })
                    .collect()
            }
        };
        if out.iter().any(|j| !j.value.re.is_finite() || !j.value.im.is_finite()) {
            return Err(Error::NonFinite(t));
        }
        Ok(out)
    }

    pub fn eval(&self, t: f64) -> Result<JetValue> {
        Ok(self.jets(t, 0)?[0])
    }
}

#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub family: Family,
    pub basis: Vec<BasisSolution>,
    pub dp: DerivedParams,
    pub regime: Regime,
}

/// δ at one time, with the imaginary remainder of complex coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaValue {
    pub delta: f64,
    pub imag: f64,
    pub err: f64,
    /// True when the imaginary part exceeds 1e−10·|δ| plus the error estimate.
    pub complex: bool,
}

impl SolutionSet {
    pub fn in_validity(&self, t: f64) -> bool {
        self.basis.iter().all(|b| b.in_validity(t))
    }

    fn validity_error(&self, t: f64) -> Error {
        let x = self.basis[0].x_of_t(t).unwrap_or(f64::NAN);
        Error::OutsideValidity {
            t,
            x,
            basis: self.family.name(),
            hint: match self.family {
                Family::FiniteT => "use the near-infinity basis for larger x",
                Family::NearInf => "use the finite-t basis for smaller x",
                Family::PowerLaw => "t must be positive",
            },
        }
    }

    /// Σ cⱼ Δᵐ Φⱼ(t), m = 0..=n.
    pub fn combination_jets(&self, coeffs: &[Complex64; 4], t: f64, n: usize) -> Result<Vec<JetValue>> {
        if !self.in_validity(t) {
            return Err(self.validity_error(t));
        }
        let mut out = vec![
            JetValue {
                value: Complex64::new(0.0, 0.0),
                err: 0.0
            };
            n + 1
        ];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.norm() == 0.0 {
                continue;
            }
            for (o, j) in out.iter_mut().zip(b.jets(t, n)?) {
                o.value += c * j.value;
                o.err += c.norm() * j.err;
            }
        }
        Ok(out)
    }

    /// δ(t) = t^α Σ cⱼ Φⱼ(x(t)).
    pub fn delta_of_t(&self, coeffs: &[Complex64; 4], t: f64) -> Result<DeltaValue> {
        let phi = self.combination_jets(coeffs, t, 0)?[0];
        let ta = t.powf(self.dp.alpha_f64());
        Ok(delta_value(phi.value * ta, phi.err * ta))
    }

    /// Coefficients reproducing the Δ-jet (Φ, ΔΦ, Δ²Φ, Δ³Φ) at t0.
    pub fn fit_coefficients(&self, t0: f64, jet: &[Complex64; 4]) -> Result<Fit> {
        let mut m = Matrix4::<Complex64>::zeros();
        for (j, b) in self.basis.iter().enumerate() {
            for (i, v) in b.jets(t0, 3)?.iter().enumerate() {
                m[(i, j)] = v.value;
            }
        }
        solve_fit(m, jet)
    }

    /// Same fit from ordinary derivatives (Φ, Φ′, Φ″, Φ‴) at t0.
    pub fn fit_derivatives(&self, t0: f64, derivs: &[f64; 4]) -> Result<Fit> {
        let jet = delta_jet_from_derivatives(t0, derivs).map(|v| Complex64::new(v, 0.0));
        self.fit_coefficients(t0, &jet)
    }
}

pub(crate) fn delta_value(v: Complex64, err: f64) -> DeltaValue {
    DeltaValue {
        delta: v.re,
        imag: v.im,
        err,
        complex: v.im.abs() > 1e-10 * v.re.abs() + err,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub coeffs: [Complex64; 4],
    pub condition: f64,
    pub warning: Option<String>,
}

pub(crate) fn solve_fit(m: Matrix4<Complex64>, jet: &[Complex64; 4]) -> Result<Fit> {
    if jet.iter().all(|v| v.norm() == 0.0) {
        let sv = m.singular_values();
        let cond = sv.max() / sv.min();
        return Ok(Fit {
            coeffs: [Complex64::new(0.0, 0.0); 4],
            condition: cond,
            warning: None,
        });
    }
    // equilibrate columns; the basis members differ in size by many decades
    let mut scaled = m;
    let mut scale = [1.0; 4];
    for j in 0..4 {
        let n = m.column(j).norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Singular);
        }
        scale[j] = n;
        scaled.column_mut(j).unscale_mut(n);
    }
    let sv = scaled.singular_values();
    let condition = sv.max() / sv.min();
    let rhs = Vector4::from_column_slice(jet);
    let sol = scaled.lu().solve(&rhs).ok_or(Error::Singular)?;
    let mut coeffs = [Complex64::new(0.0, 0.0); 4];
    for j in 0..4 {
        coeffs[j] = sol[j] / scale[j];
    }
    let warning = (condition > COND_WARN).then(|| format!("ill-conditioned fit: condition number {condition:.3e}"));
    Ok(Fit {
        coeffs,
        condition,
        warning,
    })
}

/// Δ-jet (Φ, ΔΦ, Δ²Φ, Δ³Φ) from ordinary derivatives (Φ, Φ′, Φ″, Φ‴) at t.
pub fn delta_jet_from_derivatives(t: f64, d: &[f64; 4]) -> [f64; 4] {
    [
        d[0],
        t * d[1],
        t * d[1] + t * t * d[2],
        t * d[1] + 3.0 * t * t * d[2] + t.powi(3) * d[3],
    ]
}

/// Δ-jet of Φ = t^{−α}δ from the δ-jet in u = ln t, (δ, δ_u, δ_uu, δ_uuu).
pub fn phi_jet_from_delta_jet(t: f64, alpha: f64, delta: &[f64; 4]) -> [f64; 4] {
    let f = t.powf(-alpha);
    let mut out = [0.0; 4];
    for (m, o) in out.iter_mut().enumerate() {
        let mut binom = 1.0;
        for k in 0..=m {
            *o += binom * (-alpha).powi((m - k) as i32) * delta[k];
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
        *o *= f;
    }
    out
}
