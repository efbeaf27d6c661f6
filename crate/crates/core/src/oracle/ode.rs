use crate::error::{Error, Result};
use crate::params::{ratio_to_f64, ModelParams};

/// δᵢ(t0) and dδᵢ/dt(t0) for every component.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub t0: f64,
    pub delta: Vec<f64>,
    pub ddelta_dt: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected: usize,
    /// Largest relative difference against a re-run at 1e−2·rtol.
    pub achieved: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t_grid: Vec<f64>,
    /// delta[i][n] = δᵢ(t_n)
    pub delta: Vec<Vec<f64>>,
    /// deriv[i][n] = dδᵢ/dt at t_n
    pub deriv: Vec<Vec<f64>>,
    pub stats: IntegratorStats,
}

/// Right-hand side in u = ln t with state (δ₁..δ_m, δ₁'..δ_m'):
/// δᵢ'' = (1 − 2η)δᵢ' − kᵢ² e^{αᵢu} δᵢ + (2/3) Σ Ωⱼ δⱼ.
pub(crate) struct System {
    damping: f64,
    k2: Vec<f64>,
    alphas: Vec<f64>,
    omegas: Vec<f64>,
}

impl System {
    pub(crate) fn new(mp: &ModelParams) -> Self {
        let eta = ratio_to_f64(mp.eta);
        Self {
            damping: 1.0 - 2.0 * eta,
            k2: mp.ks.iter().map(|k| k * k).collect(),
            alphas: mp
                .gammas
                .iter()
                .map(|g| ratio_to_f64(crate::params::alpha_i_exact(mp.eta, *g)))
                .collect(),
            omegas: mp.omegas.clone(),
        }
    }

    fn m(&self) -> usize {
        self.k2.len()
    }

    pub(crate) fn source(&self, delta: &[f64]) -> f64 {
        (2.0 / 3.0) * self.omegas.iter().zip(delta).map(|(w, d)| w * d).sum::<f64>()
    }

    pub(crate) fn second(&self, u: f64, i: usize, d: f64, dp: f64, src: f64) -> f64 {
        self.damping * dp - self.k2[i] * (self.alphas[i] * u).exp() * d + src
    }

    /// δ''' from differentiating the system once more in u.
    pub(crate) fn third(&self, u: f64, i: usize, d: f64, dp: f64, dpp: f64, dsrc: f64) -> f64 {
        let e = self.k2[i] * (self.alphas[i] * u).exp();
        self.damping * dpp - e * (self.alphas[i] * d + dp) + dsrc
    }

    fn rhs(&self, u: f64, y: &[f64], out: &mut [f64]) {
        let m = self.m();
        let src = self.source(&y[..m]);
        for i in 0..m {
            out[i] = y[m + i];
            out[m + i] = self.second(u, i, y[i], y[m + i], src);
        }
    }
}

// Dormand–Prince 5(4)
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MIN_STEP: f64 = 1e-14;

/// Integrates from u0 through each `targets` (increasing) and returns the states there.
fn dopri(sys: &System, u0: f64, y0: &[f64], targets: &[f64], rtol: f64) -> Result<(Vec<Vec<f64>>, IntegratorStats)> {
    let n = y0.len();
    let atol = rtol * 1e-3;
    let mut u = u0;
    let mut y = y0.to_vec();
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut h: f64 = 1e-2;
    let mut stats = IntegratorStats::default();
    let mut out = Vec::with_capacity(targets.len());
    let mut scale_ref = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for &target in targets {
        while u < target {
            let step = h.min(target - u);
            let hit = step == target - u;
            sys.rhs(u, &y, &mut k[0]);
            for s in 1..7 {
                for j in 0..n {
                    tmp[j] = y[j] + step * (0..s).map(|r| A[s][r] * k[r][j]).sum::<f64>();
                }
                sys.rhs(u + C[s] * step, &tmp, &mut k[s]);
            }
            let mut err = 0.0f64;
            let mut y_new = vec![0.0; n];
            for j in 0..n {
                y_new[j] = y[j] + step * (0..7).map(|r| B5[r] * k[r][j]).sum::<f64>();
                let e = step * (0..7).map(|r| (B5[r] - B4[r]) * k[r][j]).sum::<f64>();
                // error measured against the largest state magnitude seen so far
                let sc = atol * scale_ref.max(1e-300) + rtol * y[j].abs().max(y_new[j].abs()).max(1e-3 * scale_ref);
                err = err.max((e / sc).abs());
            }
            if !err.is_finite() {
                return Err(Error::NonFinite(u.exp()));
            }
            if err <= 1.0 {
                u = if hit { target } else { u + step };
                y = y_new;
                stats.steps += 1;
                scale_ref = scale_ref.max(y.iter().fold(0.0f64, |a, v| a.max(v.abs())));
            } else {
                stats.rejected += 1;
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if !(hit && err <= 1.0) {
                h = step * fac;
            } else {
                h = h.max(step * fac);
            }
            if h < MIN_STEP {
                return Err(Error::StepUnderflow(u.exp()));
            }
        }
        out.push(y.clone());
    }
    Ok((out, stats))
}

fn validate(mp: &ModelParams, ic: &InitialData, rtol: f64) -> Result<()> {
    if !(ic.t0 > 0.0) || !ic.t0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "t0 = {} must be positive (t = 0 is singular)",
            ic.t0
        )));
    }
    if ic.delta.len() != mp.m() || ic.ddelta_dt.len() != mp.m() {
        return Err(Error::InvalidParameter(format!(
            "initial data has {} / {} entries for {} components",
            ic.delta.len(),
            ic.ddelta_dt.len(),
            mp.m()
        )));
    }
    if !(rtol >= 1e-13) {
        return Err(Error::InvalidParameter(format!("rtol = {rtol} below 1e-13")));
    }
    Ok(())
}

/// Integrates the coupled system to each time of `t_grid` (increasing, ≥ t0).
pub fn integrate_to_grid(mp: &ModelParams, ic: &InitialData, t_grid: &[f64], rtol: f64) -> Result<Trajectory> {
    validate(mp, ic, rtol)?;
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.first().is_some_and(|&t| t < ic.t0) {
        return Err(Error::InvalidParameter("t_grid must increase from t0".into()));
    }
    let sys = System::new(mp);
    let m = mp.m();
    let mut y0 = ic.delta.clone();
    y0.extend(ic.ddelta_dt.iter().map(|v| v * ic.t0));
    let u0 = ic.t0.ln();
    let targets: Vec<f64> = t_grid.iter().map(|t| t.ln().max(u0)).collect();
    let (states, mut stats) = dopri(&sys, u0, &y0, &targets, rtol)?;
    let (fine, _) = dopri(&sys, u0, &y0, &targets, (rtol * 1e-2).max(1e-15))?;
    let peak = fine
        .iter()
        .flat_map(|s| s[..m].iter())
        .fold(0.0f64, |a, v| a.max(v.abs()));
    stats.achieved = states
        .iter()
        .zip(&fine)
        .flat_map(|(a, b)| a[..m].iter().zip(&b[..m]).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
        / peak.max(f64::MIN_POSITIVE);
    let mut delta = vec![Vec::with_capacity(t_grid.len()); m];
    let mut deriv = vec![Vec::with_capacity(t_grid.len()); m];
    for (s, &t) in states.iter().zip(t_grid) {
        for i in 0..m {
            delta[i].push(s[i]);
            deriv[i].push(s[m + i] / t);
        }
    }
    Ok(Trajectory {
        t_grid: t_grid.to_vec(),
        delta,
        deriv,
        stats,
    })
}

/// Integrates on 64 log-spaced points per decade from t0 to t_end.
pub fn integrate_system(mp: &ModelParams, ic: &InitialData, t_end: f64, rtol: f64) -> Result<Trajectory> {
    validate(mp, ic, rtol)?;
    if !(t_end > ic.t0) {
        return Err(Error::InvalidParameter(format!(
            "t_end = {t_end} must exceed t0 = {}",
            ic.t0
        )));
    }
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
    integrate_to_grid(mp, ic, &grid, rtol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Rational;

    fn eds() -> ModelParams {
        ModelParams::new(Rational::new(2, 3), vec![Rational::new(4, 3)], vec![1.0], vec![0.0]).unwrap()
    }

    #[test]
    fn growing_mode_tracks_two_thirds() {
        let ic = InitialData {
            t0: 1.0,
            delta: vec![1.0],
            ddelta_dt: vec![2.0 / 3.0],
        };
        let tr = integrate_system(&eds(), &ic, 100.0, 1e-10).unwrap();
        for (t, d) in tr.t_grid.iter().zip(&tr.delta[0]) {
            let e = t.powf(2.0 / 3.0);
            assert!((d - e).abs() <= 1e-9 * e, "t={t}: {d} vs {e}");
        }
        assert!(tr.stats.achieved < 1e-9);
    }

    #[test]
    fn rejects_nonpositive_start() {
        let ic = InitialData {
            t0: 0.0,
            delta: vec![1.0],
            ddelta_dt: vec![0.0],
        };
        assert!(integrate_system(&eds(), &ic, 10.0, 1e-10).is_err());
    }
}
