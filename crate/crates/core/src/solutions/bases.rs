use num_complex::Complex64;

use super::{
    quartic_roots, BasisSolution, Extract, Family, SolutionSet, FINITE_T_X_MAX, NEAR_INF_X_MAX, NEAR_INF_X_MIN,
};
use crate::error::{Error, Result};
use crate::mb::{MbIntegrand, ResidueSeries, Rotation, Side, DEFAULT_CHAIN as CHAIN};
use crate::params::{DerivedParams, PoleReport, Regime};

/// Roots closer than this are treated as repeated.
const REPEATED_ROOT_TOL: f64 = 1e-9;

/// Recipe for one finite-t member: G^{m,2}_{2,4} with `numerator` b-indices
/// first, optionally rotated to x e^{iπ}, then the part that is kept.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMember {
    /// b-index (0-based) whose exponent leads the member.
    pub leading: usize,
    pub numerator: Vec<usize>,
    pub rotation: Rotation,
    pub extract: Extract,
}

/// Members of the finite-t basis, one per b-index.
///
/// Within a class of b's differing by integers (sorted by decreasing b), the
/// top member is the plain G^{1,2}. Lower members would repeat the top
/// member's chain after cancellation, so member k takes the top k+1 b's into
/// the numerator. The resulting G^{k+1,2} solves the equation at x e^{iπ}
/// when k+1 is even; its real or imaginary part is taken, whichever keeps the
/// new logarithmic chain.
pub fn class_members(dp: &DerivedParams, pr: &PoleReport) -> Result<Vec<ClassMember>> {
    let b = dp.b()?;
    let mut out = Vec::new();
    for class in &pr.classes {
        let top = class[0];
        for k in 0..class.len() {
            let numerator: Vec<usize> = class[..=k].to_vec();
            let (rotation, extract) = if k == 0 {
                (Rotation::None, Extract::Full)
            } else {
                let rotation = if (k + 1) % 2 == 0 {
                    Rotation::PlusPi
                } else {
                    Rotation::None
                };
                let (c, s) = (crate::specfun::cos_pi(b[top]), crate::specfun::sin_pi(b[top]));
                let extract = if c.abs() >= s.abs() { Extract::Re } else { Extract::Im };
                (rotation, extract)
            };
            out.push(ClassMember {
                leading: class[k],
                numerator,
                rotation,
                extract,
            });
        }
    }
    out.sort_by_key(|m| m.leading);
    Ok(out)
}

fn require_alpha1(dp: &DerivedParams, pr: &PoleReport) -> Result<()> {
    if pr.regime == Regime::Alpha1Zero || dp.b_star.is_none() {
        return Err(Error::Regime {
            op: "residue basis",
            regime: Regime::Alpha1Zero.name().into(),
            hint: "alpha_1 = 0: use the power-law basis from quartic_roots".into(),
        });
    }
    Ok(())
}

fn a_params(dp: &DerivedParams) -> Result<[f64; 2]> {
    let a = dp.a()?;
    Ok([1.0 + a[0], 1.0 + a[1]])
}

/// Mellin–Barnes kernels of the finite-t members, in `class_members` order.
pub fn finite_t_kernels(dp: &DerivedParams, pr: &PoleReport) -> Result<Vec<(ClassMember, MbIntegrand)>> {
    require_alpha1(dp, pr)?;
    let b = dp.b()?;
    let av = a_params(dp)?;
    class_members(dp, pr)?
        .into_iter()
        .map(|m| {
            let mut order = m.numerator.clone();
            order.extend((0..4).filter(|i| !m.numerator.contains(i)));
            let bs: Vec<f64> = order.iter().map(|&i| b[i]).collect();
            let ib = MbIntegrand::meijer(m.numerator.len(), 2, &av, &bs)?.rotated(m.rotation);
            Ok((m, ib))
        })
        .collect()
}

/// Kernels of F₁..F₄.
pub fn near_inf_kernels(dp: &DerivedParams) -> Result<[MbIntegrand; 4]> {
    let b = dp.b()?;
    let av = a_params(dp)?;
    Ok([
        MbIntegrand::meijer(4, 1, &av, &b)?,
        MbIntegrand::meijer(4, 1, &[av[1], av[0]], &b)?,
        MbIntegrand::meijer(4, 0, &av, &b)?.rotated(Rotation::PlusPi),
        MbIntegrand::meijer(4, 0, &av, &b)?.rotated(Rotation::MinusPi),
    ])
}

/// G_j, j = 1..4, from left residue series of G^{·,2}_{2,4}.
pub fn basis_finite_t(dp: &DerivedParams, pr: &PoleReport) -> Result<SolutionSet> {
    let mut basis = Vec::with_capacity(4);
    for (m, ib) in finite_t_kernels(dp, pr)? {
        let series = ResidueSeries::new(&ib, Side::Left, CHAIN)?;
        basis.push(BasisSolution::series(
            format!("G{}", m.leading + 1),
            Family::FiniteT,
            series,
            m.extract,
            dp,
            (0.0, FINITE_T_X_MAX),
        ));
    }
    Ok(SolutionSet {
        family: Family::FiniteT,
        basis,
        dp: dp.clone(),
        regime: pr.regime,
    })
}

/// F₁ = G^{4,1}, F₂ with a₁*, a₂* swapped, F₃, F₄ = G^{4,0} at x e^{±iπ}.
pub fn basis_near_inf(dp: &DerivedParams, pr: &PoleReport) -> Result<SolutionSet> {
    require_alpha1(dp, pr)?;
    let mut basis = Vec::with_capacity(4);
    for (j, ib) in near_inf_kernels(dp)?.iter().enumerate() {
        let series = ResidueSeries::new(ib, Side::Left, CHAIN)?;
        basis.push(BasisSolution::series(
            format!("F{}", j + 1),
            Family::NearInf,
            series,
            Extract::Full,
            dp,
            (NEAR_INF_X_MIN, NEAR_INF_X_MAX),
        ));
    }
    Ok(SolutionSet {
        family: Family::NearInf,
        basis,
        dp: dp.clone(),
        regime: pr.regime,
    })
}

/// t^{d_j} members from the quartic; a repeated root adds t^d ln t.
/// Covers α₁ = 0 and, with k₁ = 0, any α₁.
pub fn basis_power_law(dp: &DerivedParams) -> Result<SolutionSet> {
    let k_eff = if dp.alpha_i == 0.into() { dp.k1 } else { 0.0 };
    if dp.alpha_i != 0.into() && dp.k1 != 0.0 {
        return Err(Error::Regime {
            op: "basis_power_law",
            regime: Regime::Generic.name().into(),
            hint: "k_1 > 0 with alpha_1 != 0: use the finite-t or near-infinity basis".into(),
        });
    }
    let q = quartic_roots(crate::params::ratio_to_f64(dp.eta), dp.omega1, k_eff);
    let mut roots: Vec<Complex64> = q.roots.to_vec();
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let mut basis: Vec<BasisSolution> = Vec::with_capacity(4);
    for d in roots {
        let mult = basis
            .iter()
            .filter(|m| m.exponent().is_some_and(|(e, _)| (e - d).norm() < REPEATED_ROOT_TOL))
            .count() as u32;
        let d = basis
            .iter()
            .find_map(|m| {
                m.exponent()
                    .filter(|(e, _)| (e - d).norm() < REPEATED_ROOT_TOL)
                    .map(|(e, _)| e)
            })
            .unwrap_or(d);
        let label = match mult {
            0 => format!("t^({})", fmt_exponent(d)),
            1 => format!("t^({}) ln t", fmt_exponent(d)),
            _ => format!("t^({}) ln^{mult} t", fmt_exponent(d)),
        };
        basis.push(BasisSolution::power(label, d, mult));
    }
    Ok(SolutionSet {
        family: Family::PowerLaw,
        basis,
        dp: dp.clone(),
        regime: if dp.alpha_i == 0.into() {
            Regime::Alpha1Zero
        } else {
            Regime::Generic
        },
    })
}

fn fmt_exponent(d: Complex64) -> String {
    if d.im == 0.0 {
        crate::numfmt::sig(d.re, 12)
    } else {
        format!(
            "{}{}{}i",
            crate::numfmt::sig(d.re, 12),
            if d.im < 0.0 { "" } else { "+" },
            crate::numfmt::sig(d.im, 12)
        )
    }
}
