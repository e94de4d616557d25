use std::process::{Command, Output};

use circle_cs::hilbert::StateVector;
use circle_cs::verify::VerifyReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_circle-cs"));
    c.env_remove("CIRCLE_CS_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn theta_values_and_domain_error() {
    let o = run(&["theta", "--kind", "3", "--v", "0", "--tau-im", "0.3183099"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("re,im\n1.77263"));
    let row = &csv_rows(&stdout(&o))[0];
    assert!((row[0] - 1.7726372).abs() < 1e-6);

    let o = run(&["theta", "--kind", "2", "--v", "0", "--tau-im", "1e6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&stdout(&o))[0], vec![0.0, 0.0]);

    assert_eq!(run(&["theta", "--kind", "3", "--v", "0", "--tau-im", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["theta", "--kind", "3", "--v", "zero", "--tau-im", "1"]).status.code(), Some(2));
}

#[test]
fn expect_examples() {
    let o = run(&["expect", "--l", "1", "--phi", "0", "--sector", "boson", "--obs", "J"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("obs,exact_re,exact_im,approx_re,approx_im,deviation\n"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!((row[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);

    let o = run(&["expect", "--l", "0", "--phi", "0", "--sector", "boson", "--obs", "QP", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["exact_re"].as_f64().unwrap() - 1.5972640).abs() < 1e-7);
    assert!((v["approx_re"].as_f64().unwrap() - 1.5972640).abs() < 1e-7);

    let o = run(&["expect", "--l", "0.25", "--phi", "0", "--sector", "boson", "--obs", "J"]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!((row[1].parse::<f64>().unwrap() - 0.2496750).abs() < 1e-7);

    assert_eq!(run(&["expect", "--l", "0", "--sector", "boson", "--obs", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["expect", "--l", "0", "--sector", "meson", "--obs", "J"]).status.code(), Some(2));
    assert_eq!(run(&["expect", "--l", "nan", "--obs", "J"]).status.code(), Some(2));
}

#[test]
fn scan_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let o = run(&["scan", "--obs", "J", "--l-min", "0", "--l-max", "1", "--n", "101", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("l,exact,approx,deviation\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 101);
    let max_dev = rows.iter().map(|r| r[3]).fold(0.0, f64::max);
    assert!(max_dev <= 3.254e-4 && max_dev > 3.2e-4, "{max_dev}");

    let o = run(&["scan", "--obs", "J", "--l-min", "-2", "--l-max", "2", "--n", "5"]);
    assert!(csv_rows(&stdout(&o)).iter().all(|r| r[3] < 1e-12));

    let o = run(&["scan", "--obs", "J", "--l-min", "-1.5", "--l-max", "1.5", "--n", "4", "--sector", "fermion"]);
    assert!(csv_rows(&stdout(&o)).iter().all(|r| r[3] < 1e-12));

    assert_eq!(run(&["scan", "--obs", "J", "--l-min", "0", "--l-max", "1", "--n", "1"]).status.code(), Some(2));
    let bad = dir.path().join("missing").join("scan.csv");
    let o = run(&["scan", "--obs", "U", "--l-min", "0", "--l-max", "1", "--n", "3", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn evolve_prints_state_json() {
    let o = run(&["evolve", "--l", "0.5", "--phi", "1", "--sector", "fermion", "--hamiltonian", "linear", "--omega", "2", "--t", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let s: StateVector = serde_json::from_str(stdout(&o).trim()).unwrap();
    let want = circle_cs::coherent::coherent_state(
        circle_cs::coherent::PhasePoint::new(0.5, 2.0).unwrap(),
        circle_cs::hilbert::Sector::Fermion,
        s.truncation(),
    )
    .unwrap();
    assert!(s.max_diff_on(&want, s.truncation().slots(s.sector())) < 1e-12);

    let o = run(&["evolve", "--l", "0", "--t", "1", "--format", "csv"]);
    assert!(stdout(&o).starts_with("j,re,im\n"));
    assert_eq!(run(&["evolve", "--l", "0", "--t", "1", "--two-jmax", "1"]).status.code(), Some(2));
    assert_eq!(run(&["evolve", "--l", "5", "--t", "1", "--two-jmax", "12"]).status.code(), Some(2));
}

#[test]
fn distribution_requires_explicit_fermion_flag() {
    let o = run(&["distribution", "--l", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let zero = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert!((zero[2] - 0.5641312).abs() < 1e-7);
    assert!((rows.iter().map(|r| r[2]).sum::<f64>() - 1.0).abs() < 1e-8);

    assert_eq!(run(&["distribution", "--l", "0", "--sector", "fermion"]).status.code(), Some(2));
    assert_eq!(run(&["distribution", "--l", "0", "--sector", "fermion", "--allow-fermion"]).status.code(), Some(0));
}

#[test]
fn commands_are_deterministic() {
    for args in [
        &["theta", "--kind", "4", "--v", "0.3", "--v-im", "0.1", "--tau-im", "0.7"][..],
        &["expect", "--l", "-0.4", "--phi", "2", "--sector", "fermion", "--obs", "relU"][..],
        &["scan", "--obs", "expJ", "--s", "1.5", "--l-min", "-1", "--l-max", "1", "--n", "7"][..],
        &["evolve", "--l", "0.3", "--t", "2"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn digits_flag() {
    let o = run(&["theta", "--kind", "3", "--v", "0", "--tau-im", "0.3183099", "--digits", "4"]);
    assert!(stdout(&o).starts_with("re,im\n1.773,"));
}

#[test]
fn verify_default_config_exits_zero() {
    let o = run(&["verify"]);
    let report: VerifyReport = serde_json::from_slice(&o.stdout).unwrap();
    let failing: Vec<&str> = report.failed().map(|c| c.name.as_str()).collect();
    assert_eq!(o.status.code(), Some(0), "failing checks: {failing:?}");
}

#[test]
fn verify_report_schema_and_insufficient_quadrature() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"n_l": 2}"#).unwrap();
    let a = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(value["version"].is_string());
    assert_eq!(value["config"]["n_l"], 2);
    for c in value["checks"].as_array().unwrap() {
        let err = c["max_abs_error"].as_f64();
        let tol = c["tolerance"].as_f64().unwrap();
        assert_eq!(c["passed"].as_bool().unwrap(), err.is_some_and(|e| e <= tol), "{c}");
        assert!(c["name"].is_string() && c["n_cases"].as_u64().unwrap() > 0);
    }
    let report: VerifyReport = serde_json::from_value(value).unwrap();
    assert!(!report.check("quadrature.completeness").unwrap().passed);
    assert!(report.check("theta.inversion_three_rel").unwrap().passed);

    // Same config through the environment variable gives the same bytes.
    let b = bin().arg("verify").env("CIRCLE_CS_CONFIG", &cfg).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"n_phi": 5}"#).unwrap();
    assert_eq!(run(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"unknown_knob": true}"#).unwrap();
    assert_eq!(run(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("none.json");
    assert_eq!(run(&["verify", "--config", missing.to_str().unwrap()]).status.code(), Some(3));
}
