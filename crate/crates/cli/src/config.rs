use std::path::PathBuf;
use std::str::FromStr;

use cosmo_growth::params::{parse_rational, ModelParams, Rational};
use cosmo_growth::verify::Scope;
use num_complex::Complex64;

use crate::Cli;
use crate::Command;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "COSMO_GROWTH_OUT";

/// Rejected flag value; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> UsageError {
    UsageError(format!("invalid value for --{flag}: {msg}"))
}

#[derive(Debug, Clone)]
pub struct Model {
    pub eta: Rational,
    pub gamma: Rational,
    pub omega1: f64,
    pub k1: f64,
    pub params: ModelParams,
}

#[derive(Debug, Clone)]
pub enum Initial {
    Coeffs([Complex64; 4]),
    /// δ, δ′, δ″, δ‴ at t0.
    Derivatives([f64; 4]),
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub model: Model,
    pub t0: f64,
    pub t1: f64,
    pub n: usize,
    pub initial: Initial,
    pub out: PathBuf,
}

/// Validated command ready for dispatch.
#[derive(Debug, Clone)]
pub enum RunConfig {
    Tables { out: PathBuf },
    Modes { model: Model },
    Eval(EvalConfig),
    Verify { scope: Scope, tol: Option<f64> },
}

fn default_dir() -> PathBuf {
    std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn rational(flag: &str, text: &str) -> Result<Rational, UsageError> {
    parse_rational(text).map_err(|e| usage(flag, e))
}

fn real(flag: &str, text: &str) -> Result<f64, UsageError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| usage(flag, format!("'{text}' is not a number")))?;
    if !v.is_finite() {
        return Err(usage(flag, format!("'{text}' is not finite")));
    }
    Ok(v)
}

fn four<T>(flag: &str, text: &str, parse: impl Fn(&str) -> Option<T>) -> Result<[T; 4], UsageError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(usage(
            flag,
            format!("expected 4 comma-separated values, got {}", parts.len()),
        ));
    }
    let vals = parts
        .iter()
        .map(|p| parse(p).ok_or_else(|| usage(flag, format!("cannot parse '{p}'"))))
        .collect::<Result<Vec<T>, _>>()?;
    vals.try_into().map_err(|_| usage(flag, "expected 4 values"))
}

fn model(eta: &str, gamma: &str, omega1: &str, k1: &str) -> Result<Model, UsageError> {
    let eta = rational("eta", eta)?;
    if eta <= Rational::from_integer(0) {
        return Err(usage("eta", "must be positive"));
    }
    let gamma = rational("gamma", gamma)?;
    let omega1 = real("omega1", omega1)?;
    if !(0.0..=1.0).contains(&omega1) {
        return Err(usage("omega1", format!("{omega1} must lie in [0, 1]")));
    }
    let k1 = real("k1", k1)?;
    if k1 < 0.0 {
        return Err(usage("k1", format!("{k1} must be non-negative")));
    }
    let params = ModelParams::with_background(eta, gamma, omega1, k1).map_err(|e| usage("omega1", e))?;
    Ok(Model {
        eta,
        gamma,
        omega1,
        k1,
        params,
    })
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, UsageError> {
        match cli.command {
            Command::Tables { out } => Ok(RunConfig::Tables {
                out: out.unwrap_or_else(default_dir),
            }),
            Command::Modes { model: m } => Ok(RunConfig::Modes {
                model: model(&m.eta, &m.gamma, &m.omega1, &m.k1)?,
            }),
            Command::Eval {
                model: m,
                t0,
                t1,
                n,
                coeffs,
                ic,
                out,
            } => {
                let model = model(&m.eta, &m.gamma, &m.omega1, &m.k1)?;
                let t0 = real("t0", &t0)?;
                if t0 <= 0.0 {
                    return Err(usage("t0", format!("{t0} must be positive")));
                }
                let t1 = real("t1", &t1)?;
                if t1 < t0 {
                    return Err(usage("t1", format!("{t1} must not be smaller than t0 = {t0}")));
                }
                if n == 0 || (n == 1 && t1 != t0) {
                    return Err(usage("n", "need at least 2 points unless t1 = t0"));
                }
                let initial = match (coeffs, ic) {
                    (Some(c), None) => Initial::Coeffs(four("coeffs", &c, |p| Complex64::from_str(p).ok())?),
                    (None, Some(d)) => {
                        Initial::Derivatives(four("ic", &d, |p| p.parse::<f64>().ok().filter(|v| v.is_finite()))?)
                    }
                    _ => return Err(UsageError("exactly one of --coeffs and --ic is required".into())),
                };
                Ok(RunConfig::Eval(EvalConfig {
                    model,
                    t0,
                    t1,
                    n,
                    initial,
                    out: out.unwrap_or_else(|| default_dir().join("eval.csv")),
                }))
            }
            Command::Verify { scope, tol } => {
                let scope = Scope::from_str(&scope).map_err(|e| usage("scope", e))?;
                let tol = match tol {
                    None => None,
                    Some(t) => {
                        let v = real("tol", &t)?;
                        if v <= 0.0 {
                            return Err(usage("tol", "must be positive"));
                        }
                        Some(v)
                    }
                };
                Ok(RunConfig::Verify { scope, tol })
            }
        }
    }
}
