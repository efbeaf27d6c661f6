use super::ode::{integrate_to_grid, InitialData, System};
use crate::error::{Error, Result};
use crate::params::{classify_poles, derive_params, ModelParams};
use crate::solutions::{phi_jet_from_delta_jet, AnalyticSolution};

/// Δ-jet of Φ₁ = t^{−α}δ₁ at t0 implied by the initial data and the system.
pub fn initial_phi_jet(mp: &ModelParams, ic: &InitialData) -> Result<[f64; 4]> {
    let sys = System::new(mp);
    let m = mp.m();
    if ic.delta.len() != m || ic.ddelta_dt.len() != m {
        return Err(Error::InvalidParameter(
            "initial data length does not match components".into(),
        ));
    }
    let u = ic.t0.ln();
    let d1: Vec<f64> = ic.ddelta_dt.iter().map(|v| v * ic.t0).collect();
    let src = sys.source(&ic.delta);
    let d2: Vec<f64> = (0..m).map(|i| sys.second(u, i, ic.delta[i], d1[i], src)).collect();
    let dsrc = sys.source(&d1);
    let d3 = sys.third(u, 0, ic.delta[0], d1[0], d2[0], dsrc);
    let alpha = crate::params::ratio_to_f64(crate::params::alpha_exact(mp.eta));
    Ok(phi_jet_from_delta_jet(ic.t0, alpha, &[ic.delta[0], d1[0], d2[0], d3]))
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub t_grid: Vec<f64>,
    pub numeric: Vec<f64>,
    pub analytic: Vec<f64>,
    /// max |δ_numeric − δ_analytic| / max |δ_numeric|
    pub max_rel_dev: f64,
    pub switch_time: Option<f64>,
    pub integrator_accuracy: f64,
    pub warnings: Vec<String>,
}

/// Fits the analytic solution for component 1 to the trajectory's initial jet
/// and compares δ₁ on 64 log-spaced points per decade over [t0, t_end].
pub fn compare_analytic(mp: &ModelParams, ic: &InitialData, t_end: f64, rtol: f64) -> Result<Comparison> {
    if !mp.reduces_to(0) {
        return Err(Error::Regime {
            op: "compare_analytic",
            regime: "multicomponent".into(),
            hint: "components other than the first must have k = 0".into(),
        });
    }
    let dp = derive_params(mp, 0)?;
    let pr = classify_poles(&dp);
    let jet = initial_phi_jet(mp, ic)?;
    let sol = AnalyticSolution::fit(&dp, &pr, ic.t0, &jet)?;
    let decades = (t_end / ic.t0).log10();
    let n = ((64.0 * decades).ceil() as usize).max(2);
    let grid: Vec<f64> = (0..=n)
        .map(|i| {
            if i == n {
                t_end
            } else {
                ic.t0 * 10f64.powf(decades * i as f64 / n as f64)
            }
        })
        .collect();
    let tr = integrate_to_grid(mp, ic, &grid, rtol)?;
    let mut analytic = Vec::with_capacity(grid.len());
    for &t in &grid {
        analytic.push(sol.delta(t)?.0.delta);
    }
    let numeric = tr.delta[0].clone();
    let peak = numeric.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let dev = numeric
        .iter()
        .zip(&analytic)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let max_rel_dev = if peak == 0.0 { dev } else { dev / peak };
    Ok(Comparison {
        t_grid: grid,
        numeric,
        analytic,
        max_rel_dev,
        switch_time: sol.switch_time().filter(|t| *t > ic.t0 && *t < t_end),
        integrator_accuracy: tr.stats.achieved,
        warnings: sol.warnings,
    })
}
