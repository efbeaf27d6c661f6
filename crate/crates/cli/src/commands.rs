use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cosmo_growth::numfmt::sig;
use cosmo_growth::params::{classify_poles, derive_params, emit_tables, ratio_to_f64, AStar, Regime, Surd, DIFF_PAIRS};
use cosmo_growth::solutions::{
    basis_finite_t, basis_near_inf, basis_power_law, delta_jet_from_derivatives, phi_jet_from_delta_jet, quartic_roots,
    AnalyticSolution, SolutionSet,
};
use cosmo_growth::verify::{self, Scope};
use cosmo_growth::Error;
use num_complex::Complex64;

use crate::config::{EvalConfig, Initial, Model, RunConfig};

const TABLE_DIGITS: usize = 15;
const CSV_DIGITS: usize = 17;

pub fn dispatch(cfg: RunConfig) -> ExitCode {
    let result = match cfg {
        RunConfig::Tables { out } => cmd_tables(&out).map(|paths| {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }),
        RunConfig::Modes { model } => cmd_modes(&model).map(|report| {
            print!("{report}");
            ExitCode::SUCCESS
        }),
        RunConfig::Eval(cfg) => cmd_eval(&cfg),
        RunConfig::Verify { scope, tol } => Ok(cmd_verify(scope, tol, &mut io::stdout().lock())),
    };
    match result {
        Ok(code) => code,
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CmdError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[derive(Debug)]
pub enum CmdError {
    /// Request the model cannot serve (validity, regime); exit 2.
    Usage(String),
    /// I/O or numerical failure; exit 1.
    Failed(String),
}

impl From<io::Error> for CmdError {
    fn from(e: io::Error) -> Self {
        CmdError::Failed(e.to_string())
    }
}

impl From<csv::Error> for CmdError {
    fn from(e: csv::Error) -> Self {
        CmdError::Failed(e.to_string())
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match e {
            Error::OutsideValidity { .. } | Error::Regime { .. } | Error::InvalidParameter(_) => {
                CmdError::Usage(e.to_string())
            }
            other => CmdError::Failed(other.to_string()),
        }
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, CmdError> {
    let file = fs::File::create(path).map_err(|e| CmdError::Failed(format!("cannot write {}: {e}", path.display())))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

fn pm(s: Option<Surd>) -> String {
    match s {
        Some(s) if s.coeff == 0.into() => "0".into(),
        Some(s) => format!("±{s}"),
        None => String::new(),
    }
}

fn value(s: Option<Surd>) -> String {
    s.map(|s| sig(s.to_f64(), TABLE_DIGITS)).unwrap_or_default()
}

pub fn cmd_tables(dir: &Path) -> Result<Vec<PathBuf>, CmdError> {
    fs::create_dir_all(dir).map_err(|e| CmdError::Failed(format!("cannot create {}: {e}", dir.display())))?;
    let tables = emit_tables();

    let p21 = dir.join("table21.csv");
    let mut w = csv_writer(&p21)?;
    w.write_record([
        "eta",
        "gamma",
        "alpha_i",
        "alpha_i_value",
        "alpha",
        "alpha_value",
        "b1_b2",
        "b1_value",
        "b3_b4",
        "b3_value",
        "a1_a2",
        "a1_value",
        "a2_value",
    ])?;
    for r in &tables.table21 {
        let (a_sym, a1, a2) = match r.a_surd {
            Some(s) => (
                format!("-1 ± {s}"),
                sig(-1.0 + s.to_f64(), TABLE_DIGITS),
                sig(-1.0 - s.to_f64(), TABLE_DIGITS),
            ),
            None => Default::default(),
        };
        w.write_record([
            r.eta.to_string(),
            r.gamma.to_string(),
            r.alpha_i.to_string(),
            sig(ratio_to_f64(r.alpha_i), TABLE_DIGITS),
            r.alpha.to_string(),
            sig(ratio_to_f64(r.alpha), TABLE_DIGITS),
            pm(r.b12),
            value(r.b12),
            pm(r.b34),
            value(r.b34),
            a_sym,
            a1,
            a2,
        ])?;
    }
    w.flush()?;

    let p22 = dir.join("table22.csv");
    let mut w = csv_writer(&p22)?;
    let mut header: Vec<String> = vec!["eta".into(), "gamma".into()];
    for i in 1..=4 {
        header.push(format!("b{i}"));
        header.push(format!("b{i}_value"));
    }
    for (i, j) in DIFF_PAIRS {
        header.push(format!("b{}-b{}", i + 1, j + 1));
        header.push(format!("b{}-b{}_value", i + 1, j + 1));
    }
    w.write_record(&header)?;
    for r in &tables.table22 {
        let mut rec = vec![r.eta.to_string(), r.gamma.to_string()];
        for b in r.b {
            rec.push(b.to_string());
            rec.push(sig(b.to_f64(), TABLE_DIGITS));
        }
        for d in &r.diffs {
            rec.push(d.to_string());
            rec.push(sig(d.to_f64(), TABLE_DIGITS));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(vec![p21, p22])
}

fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        sig(z.re, TABLE_DIGITS)
    } else {
        format!(
            "{}{}{}i",
            sig(z.re, TABLE_DIGITS),
            if z.im < 0.0 { "-" } else { "+" },
            sig(z.im.abs(), TABLE_DIGITS)
        )
    }
}

fn list_basis(report: &mut String, set: &SolutionSet) {
    let _ = writeln!(report, "basis {}:", set.family.name());
    for (j, b) in set.basis.iter().enumerate() {
        let _ = write!(report, "  c{} {}", j + 1, b.label);
        if b.x_range.1.is_finite() {
            let _ = write!(report, "  x in [{}, {}]", b.x_range.0, b.x_range.1);
        }
        let _ = writeln!(report);
    }
}

pub fn cmd_modes(model: &Model) -> Result<String, CmdError> {
    let dp = derive_params(&model.params, 0)?;
    let pr = classify_poles(&dp);
    let mut r = String::new();
    let _ = writeln!(
        r,
        "eta = {}, gamma = {}, omega1 = {}, k1 = {}",
        model.eta, model.gamma, model.omega1, model.k1
    );
    let _ = writeln!(r, "regime: {}", pr.regime.name());
    for f in &dp.flags {
        let _ = writeln!(r, "flag: {f}");
    }
    let _ = writeln!(r, "alpha_i = {} ({})", dp.alpha_i, sig(dp.alpha1(), TABLE_DIGITS));
    let _ = writeln!(r, "alpha = {} ({})", dp.alpha, sig(dp.alpha_f64(), TABLE_DIGITS));
    if let Some(b) = dp.b_star {
        for (i, v) in b.iter().enumerate() {
            match dp.b_exact {
                Some(be) => {
                    let _ = writeln!(r, "b*{} = {} ({})", i + 1, be[i], sig(*v, TABLE_DIGITS));
                }
                None => {
                    let _ = writeln!(r, "b*{} = {}", i + 1, sig(*v, TABLE_DIGITS));
                }
            }
        }
    }
    match dp.a_star {
        Some(AStar::Real(a)) => {
            let _ = writeln!(r, "a*1 = {}", sig(a[0], TABLE_DIGITS));
            let _ = writeln!(r, "a*2 = {}", sig(a[1], TABLE_DIGITS));
        }
        Some(AStar::Complex { re, im }) => {
            let _ = writeln!(r, "a*1,2 = {} ± {}i", sig(re, TABLE_DIGITS), sig(im, TABLE_DIGITS));
        }
        None => {}
    }
    if !pr.pairwise_diffs.is_empty() {
        let diffs: Vec<String> = DIFF_PAIRS
            .iter()
            .zip(&pr.pairwise_diffs)
            .map(|(&(i, j), d)| format!("b*{}-b*{} = {}", i + 1, j + 1, sig(*d, TABLE_DIGITS)))
            .collect();
        let _ = writeln!(r, "differences: {}", diffs.join(", "));
        let pairs: Vec<String> = pr.integer_pairs.iter().map(|(i, j)| format!("({i},{j})")).collect();
        let _ = writeln!(
            r,
            "integer pairs: {}",
            if pairs.is_empty() {
                "none".to_string()
            } else {
                pairs.join(" ")
            }
        );
        if let Some((i, j)) = pr
            .integer_pairs
            .iter()
            .find(|&&(i, j)| pr.pairwise_diffs[pair_index(i, j)] == 0.0)
        {
            let _ = writeln!(r, "coincident: b*{i} = b*{j}");
        }
        let _ = writeln!(r, "max pole order: {}", pr.max_order);
    }
    if pr.regime == Regime::Alpha1Zero || dp.k1 == 0.0 {
        let q = quartic_roots(ratio_to_f64(dp.eta), dp.omega1, dp.k1);
        let mut ex = q.delta_exponents(dp.alpha_f64());
        ex.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        let big = ex.iter().map(|z| z.norm()).fold(0.0, f64::max);
        // exponents that cancel to rounding level print as 0
        let ex: Vec<String> = ex
            .iter()
            .map(|z| {
                complex(if z.norm() <= 1e-14 * big {
                    Complex64::new(0.0, 0.0)
                } else {
                    *z
                })
            })
            .collect();
        let _ = writeln!(r, "delta exponents: {}", ex.join(", "));
        list_basis(&mut r, &basis_power_law(&dp)?);
    } else {
        list_basis(&mut r, &basis_finite_t(&dp, &pr)?);
        list_basis(&mut r, &basis_near_inf(&dp, &pr)?);
    }
    Ok(r)
}

fn pair_index(i: usize, j: usize) -> usize {
    DIFF_PAIRS.iter().position(|&p| p == (i - 1, j - 1)).unwrap_or(0)
}

fn grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![t0];
    }
    let (l0, l1) = (t0.ln(), t1.ln());
    (0..n)
        .map(|i| match i {
            0 => t0,
            _ if i == n - 1 => t1,
            _ => (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

fn sidecar_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".report.txt");
    csv.with_file_name(name)
}

pub fn cmd_eval(cfg: &EvalConfig) -> Result<ExitCode, CmdError> {
    let dp = derive_params(&cfg.model.params, 0)?;
    let pr = classify_poles(&dp);
    let sol = match cfg.initial {
        Initial::Coeffs(c) => AnalyticSolution::with_coeffs(&dp, &pr, cfg.t0, c)?,
        Initial::Derivatives(d) => {
            let djet = delta_jet_from_derivatives(cfg.t0, &d);
            let jet = phi_jet_from_delta_jet(cfg.t0, dp.alpha_f64(), &djet);
            AnalyticSolution::fit(&dp, &pr, cfg.t0, &jet)?
        }
    };
    let ts = grid(cfg.t0, cfg.t1, cfg.n);
    // evaluate everything first so a validity failure leaves no partial file
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        rows.push((t, sol.delta(t)?));
    }

    if let Some(dir) = cfg.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CmdError::Failed(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut w = csv_writer(&cfg.out)?;
    w.write_record(["t", "delta", "err_estimate", "basis_used"])?;
    let mut complex_points = 0usize;
    for (t, (v, fam)) in &rows {
        if v.complex {
            complex_points += 1;
        }
        w.write_record([
            sig(*t, CSV_DIGITS),
            sig(v.delta, CSV_DIGITS),
            sig(v.err, CSV_DIGITS),
            fam.name().into(),
        ])?;
    }
    w.flush()?;

    let mut rep = String::new();
    let m = &cfg.model;
    let _ = writeln!(
        rep,
        "eta = {}, gamma = {}, omega1 = {}, k1 = {}",
        m.eta, m.gamma, m.omega1, m.k1
    );
    let _ = writeln!(rep, "regime: {}", pr.regime.name());
    let _ = writeln!(rep, "t0 = {}, t1 = {}, points = {}", cfg.t0, cfg.t1, ts.len());
    match cfg.initial {
        Initial::Coeffs(_) => {
            let _ = writeln!(rep, "input: coefficients");
        }
        Initial::Derivatives(d) => {
            let _ = writeln!(rep, "input: derivatives at t0 {:?}", d);
        }
    }
    for s in &sol.segments {
        let _ = writeln!(rep, "segment {}: x in [{}, {}]", s.set.family.name(), s.x_lo, s.x_hi);
        if s.condition.is_finite() {
            let _ = writeln!(rep, "  condition {:.3e}", s.condition);
        }
        for (b, c) in s.set.basis.iter().zip(&s.coeffs) {
            let _ = writeln!(rep, "  {} * {}", complex(*c), b.label);
        }
    }
    match sol.switch_time() {
        Some(ts_) if ts_ > cfg.t0 && ts_ < cfg.t1 => {
            let _ = writeln!(rep, "switchover at t = {} (x = {})", sig(ts_, CSV_DIGITS), sol.x_switch);
        }
        Some(ts_) => {
            let _ = writeln!(rep, "switchover at t = {} lies outside the grid", sig(ts_, CSV_DIGITS));
        }
        None => {
            let _ = writeln!(rep, "single basis");
        }
    }
    if complex_points > 0 {
        let _ = writeln!(
            rep,
            "warning: {complex_points} points have a non-negligible imaginary part"
        );
    }
    for wmsg in &sol.warnings {
        let _ = writeln!(rep, "warning: {wmsg}");
    }
    let side = sidecar_path(&cfg.out);
    fs::write(&side, rep).map_err(|e| CmdError::Failed(format!("cannot write {}: {e}", side.display())))?;
    println!("wrote {} and {}", cfg.out.display(), side.display());
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_verify(scope: Scope, tol: Option<f64>, out: &mut impl Write) -> ExitCode {
    let checks = verify::run(scope, tol);
    let passed = checks.iter().filter(|c| c.passed).count();
    for c in &checks {
        let _ = writeln!(out, "{c}");
    }
    let _ = writeln!(out, "SUMMARY {passed}/{} passed", checks.len());
    if passed == checks.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
