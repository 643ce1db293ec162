use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltabound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Data rows of a CSV table as header-keyed string maps.
fn csv_rows(out: &Output) -> Vec<std::collections::HashMap<String, String>> {
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| headers.iter().map(String::from).zip(r.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn solve_dirichlet_one_state() {
    let out = run(&["solve", "--dim", "1", "--bc", "dirichlet", "--a", "1", "--beta", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!((num(&rows[0]["k"]) - 1.41).abs() < 1e-2);
    assert!(stderr(&out).contains("# count=1"));
}

#[test]
fn solve_subcritical_is_empty_and_ok() {
    let out = run(&["solve", "--dim", "1", "--bc", "dirichlet", "--a", "1", "--beta", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(csv_rows(&out).is_empty());
    assert_eq!(stdout(&out), "k,lambda,dispersion_residual,jump_residual\n");
}

#[test]
fn solve_2d_zero_coupling_is_empty() {
    let out = run(&["--format", "json", "solve", "--dim", "2", "--a", "1", "--beta", "0", "--mode", "modified"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
    assert_eq!(v["meta"]["count"], 0);
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn bc_in_2d_warns() {
    let out = run(&["solve", "--dim", "2", "--bc", "neumann", "--a", "1", "--beta", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning: --bc is ignored"));
    assert_eq!(csv_rows(&out).len(), 1);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["solve", "--dim", "1", "--a", "1", "--beta", "3"][..],
        &["solve", "--dim", "3", "--bc", "dirichlet", "--a", "1", "--beta", "3"],
        &["solve", "--dim", "1", "--bc", "dirichlet", "--a", "-1", "--beta", "3"],
        &["solve", "--dim", "1", "--bc", "sideways", "--a", "1", "--beta", "3"],
        &["gplot", "--a", "1", "--mode", "paper-eq13"],
        &["verify", "--suite", "everything"],
        &["bessel", "--kind", "Y0", "--x-min", "0"],
        &["nonsense"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn betacr_dirichlet_checks_are_one() {
    let out = run(&["betacr", "--dim", "1", "--bc", "dirichlet", "--a-min", "0.001", "--a-max", "1", "--points", "11", "--log"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 11);
    assert_eq!(num(&rows[0]["a"]), 0.001);
    assert_eq!(num(&rows[10]["a"]), 1.0);
    for row in &rows {
        assert!((num(&row["check"]) - 1.0).abs() <= 1e-8, "{row:?}");
    }
}

#[test]
fn betacr_neumann_is_zero() {
    let out = run(&["betacr", "--dim", "1", "--bc", "neumann", "--a-min", "1", "--a-max", "1", "--points", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!(num(&rows[0]["beta_cr"]) <= 1e-10);
}

#[test]
fn betacr_radial_positive_finite() {
    let out = run(&["betacr", "--dim", "2", "--a-min", "0.5", "--a-max", "2", "--points", "3", "--mode", "modified"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let b = num(&row["beta_cr"]);
        assert!(b > 0.0 && b.is_finite());
        assert_eq!(row["method"], "curve-infimum");
        // β_cr · b ln b = 1 for the modified basis.
        assert!((num(&row["check"]) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn gplot_emits_samples_and_fraction() {
    let out = run(&["gplot", "--a", "0.5", "--k-min", "0.5", "--k-max", "10", "--points", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_rows(&out).len(), 500);
    assert!(stderr(&out).contains("# fraction_near_minus_one="));

    let out = run(&["--format", "json", "gplot", "--a", "0.5", "--points", "200", "--mode", "modified"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["pole"] == false && r["g"].is_number()));
}

#[test]
fn oracle_dirichlet_matches_solve() {
    let out = run(&[
        "oracle", "--dim", "1", "--bc", "dirichlet", "--a", "1", "--beta", "3", "--h", "1e-3", "--extent", "40", "--richardson",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert!(num(&rows[0]["rel_diff"]) < 1e-3);
}

#[test]
fn oracle_robin_free_state() {
    let out = run(&["oracle", "--dim", "1", "--bc", "robin", "--sigma", "1", "--a", "1", "--beta", "0", "--richardson"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((num(&csv_rows(&out)[0]["lambda"]) + 1.0).abs() < 1e-5);
}

#[test]
fn oracle_radial_reports_every_mode() {
    let out = run(&["oracle", "--dim", "2", "--a", "1", "--beta", "0.2284", "--h", "1e-2", "--extent", "60"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    let modes: Vec<&str> = rows.iter().map(|r| r["mode"].as_str()).collect();
    assert_eq!(modes, ["paper", "paper-eq13", "modified"]);
}

#[test]
fn bessel_values() {
    let out = run(&["bessel", "--kind", "k0", "--x-min", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((num(&csv_rows(&out)[0]["value"]) - 0.421_024_438_240_708_3).abs() < 1e-15);
}

#[test]
fn csv_numbers_round_trip() {
    let out = run(&["solve", "--dim", "1", "--bc", "robin", "--sigma", "1", "--a", "3", "--beta", "1"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    for row in &rows {
        for key in ["k", "lambda", "dispersion_residual", "jump_residual"] {
            let text = &row[key];
            assert_eq!(&format!("{:.16e}", num(text)), text);
        }
    }
}

#[test]
fn identical_invocations_identical_output() {
    let args = ["--format", "json", "solve", "--dim", "2", "--a", "1", "--beta", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn stamp_only_touches_meta() {
    let plain = run(&["--format", "json", "solve", "--dim", "1", "--bc", "neumann", "--a", "1", "--beta", "1"]);
    let stamped = run(&["--format", "json", "--stamp", "solve", "--dim", "1", "--bc", "neumann", "--a", "1", "--beta", "1"]);
    let p: Value = serde_json::from_slice(&plain.stdout).unwrap();
    let s: Value = serde_json::from_slice(&stamped.stdout).unwrap();
    assert_eq!(p["rows"], s["rows"]);
    assert!(p["meta"].get("stamp").is_none());
    assert!(s["meta"]["stamp"].as_u64().unwrap() > 0);
}

#[test]
fn verify_suites_pass() {
    for suite in ["specfun", "1d"] {
        let out = run(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["report"]["passed"], true);
        assert!(stderr(&out).contains("PASS"));
    }
}

#[test]
fn verify_fails_when_tolerances_are_squeezed() {
    let out = run(&["verify", "--suite", "specfun", "--tol-scale", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("FAIL"));
}
