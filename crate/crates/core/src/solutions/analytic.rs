use num_complex::Complex64;

use super::{
    basis_finite_t, basis_near_inf, basis_power_law, delta_value, DeltaValue, Family, Fit, JetValue, SolutionSet,
    X_SWITCH,
};
use crate::error::{Error, Result};
use crate::params::{DerivedParams, PoleReport, Regime};

/// One basis with its coefficients, used for x in [x_lo, x_hi].
#[derive(Debug, Clone)]
pub struct Segment {
    pub set: SolutionSet,
    pub coeffs: [Complex64; 4],
    pub x_lo: f64,
    pub x_hi: f64,
    pub condition: f64,
}

/// A particular solution Φ assembled from one or two bases, the second
/// matched to the first by its Δ-jet at x = x_switch.
#[derive(Debug, Clone)]
pub struct AnalyticSolution {
    pub segments: Vec<Segment>,
    pub dp: DerivedParams,
    pub x_switch: f64,
    pub warnings: Vec<String>,
}

fn to_complex(jet: &[f64; 4]) -> [Complex64; 4] {
    jet.map(|v| Complex64::new(v, 0.0))
}

enum Start {
    Jet([Complex64; 4]),
    Coeffs([Complex64; 4]),
}

/// Basis family used at t0: power law whenever x is not defined, otherwise
/// finite-t up to x_switch and near-infinity beyond.
pub fn primary_set(dp: &DerivedParams, pr: &PoleReport, t0: f64, x_switch: f64) -> Result<SolutionSet> {
    if pr.regime == Regime::Alpha1Zero || dp.k1 == 0.0 {
        return basis_power_law(dp);
    }
    if dp.x_of_t(t0)? <= x_switch {
        basis_finite_t(dp, pr)
    } else {
        basis_near_inf(dp, pr)
    }
}

impl AnalyticSolution {
    /// Fit to the Δ-jet (Φ, ΔΦ, Δ²Φ, Δ³Φ) at t0.
    pub fn fit(dp: &DerivedParams, pr: &PoleReport, t0: f64, jet: &[f64; 4]) -> Result<Self> {
        Self::fit_with_switch(dp, pr, t0, jet, X_SWITCH)
    }

    pub fn fit_with_switch(
        dp: &DerivedParams,
        pr: &PoleReport,
        t0: f64,
        jet: &[f64; 4],
        x_switch: f64,
    ) -> Result<Self> {
        Self::build(dp, pr, t0, Start::Jet(to_complex(jet)), x_switch)
    }

    /// Coefficients of the basis `primary_set` picks at t0, continued across
    /// the switch by jet matching.
    pub fn with_coeffs(dp: &DerivedParams, pr: &PoleReport, t0: f64, coeffs: [Complex64; 4]) -> Result<Self> {
        Self::build(dp, pr, t0, Start::Coeffs(coeffs), X_SWITCH)
    }

    fn build(dp: &DerivedParams, pr: &PoleReport, t0: f64, start: Start, x_switch: f64) -> Result<Self> {
        if !(t0 > 0.0) || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("t0 = {t0} must be positive")));
        }
        let mut warnings = Vec::new();
        let first = primary_set(dp, pr, t0, x_switch)?;
        let fit = match start {
            Start::Jet(jet) => first.fit_coefficients(t0, &jet)?,
            Start::Coeffs(coeffs) => {
                if !first.in_validity(t0) {
                    return Err(Error::OutsideValidity {
                        t: t0,
                        x: dp.x_of_t(t0).unwrap_or(f64::NAN),
                        basis: first.family.name(),
                        hint: "coefficients refer to the basis at t0, which must lie inside its range",
                    });
                }
                Fit {
                    coeffs,
                    condition: f64::NAN,
                    warning: None,
                }
            }
        };
        warnings.extend(fit.warning.clone());
        if first.family == Family::PowerLaw {
            return Ok(Self {
                segments: vec![Segment {
                    set: first,
                    coeffs: fit.coeffs,
                    x_lo: 0.0,
                    x_hi: f64::INFINITY,
                    condition: fit.condition,
                }],
                dp: dp.clone(),
                x_switch,
                warnings,
            });
        }
        let second = match first.family {
            Family::FiniteT => basis_near_inf(dp, pr)?,
            _ => basis_finite_t(dp, pr)?,
        };
        let t_sw = dp.t_of_x(x_switch)?;
        let sw_jet = first.combination_jets(&fit.coeffs, t_sw, 3)?;
        let sw_jet: [Complex64; 4] = std::array::from_fn(|i| sw_jet[i].value);
        let fit2 = second.fit_coefficients(t_sw, &sw_jet)?;
        warnings.extend(fit2.warning.clone());
        let range = |s: &SolutionSet| match s.family {
            Family::FiniteT => (s.basis[0].x_range.0, x_switch),
            _ => (x_switch, s.basis[0].x_range.1),
        };
        let (lo1, hi1) = range(&first);
        let (lo2, hi2) = range(&second);
        let mut segments = vec![
            Segment {
                set: first,
                coeffs: fit.coeffs,
                x_lo: lo1,
                x_hi: hi1,
                condition: fit.condition,
            },
            Segment {
                set: second,
                coeffs: fit2.coeffs,
                x_lo: lo2,
                x_hi: hi2,
                condition: fit2.condition,
            },
        ];
        segments.sort_by(|a, b| a.x_lo.total_cmp(&b.x_lo));
        Ok(Self {
            segments,
            dp: dp.clone(),
            x_switch,
            warnings,
        })
    }

    /// Single-basis solution with given coefficients.
    pub fn from_coeffs(set: SolutionSet, coeffs: [Complex64; 4]) -> Self {
        let (x_lo, x_hi) = match set.family {
            Family::PowerLaw => (0.0, f64::INFINITY),
            _ => set.basis[0].x_range,
        };
        let dp = set.dp.clone();
        Self {
            segments: vec![Segment {
                set,
                coeffs,
                x_lo,
                x_hi,
                condition: f64::NAN,
            }],
            dp,
            x_switch: X_SWITCH,
            warnings: Vec::new(),
        }
    }

    /// Segment covering t, or the validity error of the nearest one.
    pub fn segment(&self, t: f64) -> Result<&Segment> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
        }
        let first = &self.segments[0];
        if first.set.family == Family::PowerLaw {
            return Ok(first);
        }
        let x = self.dp.x_of_t(t)?;
        if let Some(s) = self.segments.iter().find(|s| x >= s.x_lo && x <= s.x_hi) {
            return Ok(s);
        }
        let last = self.segments.last().unwrap_or(first);
        let (basis, hint) = if x > last.x_hi {
            (
                last.set.family.name(),
                "x beyond the near-infinity range; series cancellation too severe",
            )
        } else {
            (first.set.family.name(), "x below the covered range")
        };
        Err(Error::OutsideValidity { t, x, basis, hint })
    }

    pub fn phi_jets(&self, t: f64, n: usize) -> Result<Vec<JetValue>> {
        let s = self.segment(t)?;
        s.set.combination_jets(&s.coeffs, t, n)
    }

    /// δ(t) and the family that produced it.
    pub fn delta(&self, t: f64) -> Result<(DeltaValue, Family)> {
        let s = self.segment(t)?;
        let phi = s.set.combination_jets(&s.coeffs, t, 0)?[0];
        let ta = t.powf(self.dp.alpha_f64());
        Ok((delta_value(phi.value * ta, phi.err * ta), s.set.family))
    }

    /// t where the solution switches bases, if it does.
    pub fn switch_time(&self) -> Option<f64> {
        if self.segments.len() < 2 {
            return None;
        }
        self.dp.t_of_x(self.x_switch).ok()
    }
}
