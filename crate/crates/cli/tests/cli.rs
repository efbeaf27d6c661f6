use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cosmo-growth"));
    c.env_remove("COSMO_GROWTH_OUT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cosmo-growth")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn tables_are_written_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(run(&["tables", "--out", out]).status.success());
    let t21 = fs::read(dir.path().join("table21.csv")).unwrap();
    let t22 = fs::read(dir.path().join("table22.csv")).unwrap();
    assert!(run(&["tables", "--out", out]).status.success());
    assert_eq!(t21, fs::read(dir.path().join("table21.csv")).unwrap());
    assert_eq!(t22, fs::read(dir.path().join("table22.csv")).unwrap());
    assert!(!t21.contains(&b'\r'));

    let (h, rows) = read_csv(&dir.path().join("table21.csv"));
    assert_eq!(h[0], "eta");
    assert_eq!(rows.len(), 10);
    let row = rows.iter().find(|r| r[0] == "2/3" && r[1] == "1").unwrap();
    assert_eq!(row[10], "-1 ± sqrt(13)/4");
    let a1: f64 = row[11].parse().unwrap();
    assert!((a1 - (-1.0 + 13f64.sqrt() / 4.0)).abs() < 1e-14);
    let row = rows.iter().find(|r| r[0] == "1/2" && r[1] == "2/3").unwrap();
    assert_eq!(row[8], "±sqrt(6)/5");

    let (h, rows) = read_csv(&dir.path().join("table22.csv"));
    assert_eq!(rows.len(), 9);
    let col = h.iter().position(|c| c == "b3-b4").unwrap();
    let row = rows.iter().find(|r| r[0] == "1/2" && r[1] == "5/3").unwrap();
    assert_eq!(row[col], "2*sqrt(6)");
    let v: f64 = row[col + 1].parse().unwrap();
    assert!((v - 2.0 * 6f64.sqrt()).abs() < 1e-13);
}

#[test]
fn tables_default_to_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .arg("tables")
        .env("COSMO_GROWTH_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("table21.csv").exists());
    assert!(dir.path().join("table22.csv").exists());
}

#[test]
fn modes_reports_eds_exponents() {
    let o = run(&[
        "modes", "--eta", "2/3", "--gamma", "4/3", "--omega1", "0.5", "--k1", "0",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("regime: ALPHA1_ZERO"));
    let line = s.lines().find(|l| l.starts_with("delta exponents:")).unwrap();
    let ex: Vec<f64> = line["delta exponents:".len()..]
        .split(',')
        .map(|v| v.trim().parse().unwrap())
        .collect();
    for (got, want) in ex.iter().zip([2.0 / 3.0, 0.0, -1.0 / 3.0, -1.0]) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn modes_reports_table_row_and_coincident_pair() {
    let s = stdout(&run(&["modes", "--eta", "2/3", "--gamma", "1", "--omega1", "0.5"]));
    assert!(s.contains("b*1 = 1/4"));
    assert!(s.contains("b*3 = 5/4"));
    let s = stdout(&run(&[
        "modes", "--eta", "1/2", "--gamma", "1", "--omega1", "0.5", "--k1", "1",
    ]));
    assert!(s.contains("regime: INTEGER_DIFF"));
    assert!(s.contains("coincident: b*1 = b*2"));
    assert!(s.contains("max pole order: 2"));
}

#[test]
fn eval_zero_coefficients_give_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("zero.csv");
    let o = run(&[
        "eval",
        "--eta",
        "2/3",
        "--gamma",
        "1",
        "--k1",
        "0.3",
        "--t0",
        "1",
        "--t1",
        "100",
        "--n",
        "9",
        "--coeffs",
        "0,0,0,0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = read_csv(&out);
    assert_eq!(h, ["t", "delta", "err_estimate", "basis_used"]);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn eval_eds_growing_mode_matches_power_law() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eds.csv");
    let t0: f64 = 2.0;
    let ic = format!(
        "{:e},{:e},{:e},{:e}",
        t0.powf(2.0 / 3.0),
        2.0 / 3.0 * t0.powf(-1.0 / 3.0),
        -2.0 / 9.0 * t0.powf(-4.0 / 3.0),
        8.0 / 27.0 * t0.powf(-7.0 / 3.0)
    );
    let o = run(&[
        "eval",
        "--eta",
        "2/3",
        "--gamma",
        "4/3",
        "--omega1",
        "0.5",
        "--t0",
        "2",
        "--t1",
        "2000",
        "--n",
        "31",
        "--ic",
        &ic,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = read_csv(&out);
    for r in &rows {
        let t: f64 = r[0].parse().unwrap();
        let d: f64 = r[1].parse().unwrap();
        let want = t.powf(2.0 / 3.0);
        assert!((d - want).abs() <= 1e-12 * want, "t = {t}: {d} vs {want}");
        assert_eq!(r[3], "power_law");
    }
}

#[test]
fn eval_crosses_switchover_and_logs_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let o = run(&[
        "eval",
        "--eta",
        "2/3",
        "--gamma",
        "1",
        "--k1",
        "0.3",
        "--t0",
        "1",
        "--t1",
        "100",
        "--n",
        "17",
        "--ic",
        "1,0,0,0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = read_csv(&out);
    assert_eq!(rows.first().unwrap()[3], "finite_t");
    assert_eq!(rows.last().unwrap()[3], "near_inf");
    // t columns carry 17 significant digits
    assert_eq!(rows[0][0], "1.0000000000000000");
    let report = fs::read_to_string(dir.path().join("run.csv.report.txt")).unwrap();
    assert!(report.contains("switchover at t ="));
}

#[test]
fn eval_outside_validity_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("far.csv");
    let o = run(&[
        "eval",
        "--eta",
        "2/3",
        "--gamma",
        "1",
        "--k1",
        "0.3",
        "--t0",
        "1",
        "--t1",
        "1e6",
        "--ic",
        "1,0,0,0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("outside the validity range"));
    assert!(!out.exists());
}

#[test]
fn invalid_flags_exit_2_and_name_the_flag() {
    let o = run(&["modes", "--eta", "2/3", "--gamma", "1", "--omega1", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--omega1"));
    let o = run(&[
        "eval", "--eta", "2/3", "--gamma", "1", "--t0", "-1", "--t1", "2", "--ic", "1,0,0,0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--t0"));
    let o = run(&[
        "eval", "--eta", "2/3", "--gamma", "1", "--t0", "1", "--t1", "2", "--ic", "1,0,0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--ic"));
    let o = run(&["eval", "--eta", "2/3", "--gamma", "1", "--t0", "1", "--t1", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_tables_passes() {
    let o = run(&["verify", "--scope", "tables"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("CHECK tables PASS")));
    assert!(s.lines().any(|l| l.starts_with("CHECK eds_modes PASS")));
}

#[test]
fn verify_unknown_scope_exits_2() {
    let o = run(&["verify", "--scope", "everything"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_tight_tolerance_fails_on_residual_floor() {
    let o = run(&["verify", "--scope", "ode", "--tol", "1e-15"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("CHECK operator_residual FAIL")));
}
