use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitaria")).args(args).env_remove("UNITARIA_CACHE_DIR").output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn zeta_at_minus_eleven() {
    let r = report(&["zeta", "--neg", "--k", "6"]);
    assert_eq!(r["result"], "691/32760");
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "zeta");
}

#[test]
fn doubling_orbit_counts() {
    let r = report(&["doubling-orbits", "--n", "2", "--q", "2"]);
    let c = &r["result"]["counts"];
    assert_eq!((c["total"].as_u64(), c["X0"].as_u64(), c["X1"].as_u64()), (Some(27), Some(18), Some(9)));
    assert_eq!(r["result"]["unitary_order"], 18);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_is_reported_as_json() {
    let out = run(&["rankin", "--s", "9", "--cutoff", "100"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "rankin");
    assert!(v["error"]["kind"].is_string() && v["error"]["message"].is_string());
}

#[test]
fn low_precision_is_rejected() {
    let out = run(&["--precision", "32", "zeta", "--neg", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"]["message"].as_str().unwrap().contains("64"));
}

#[test]
fn negative_arguments_parse() {
    let r = report(&["satake", "--ap", "-24", "--p", "2", "--k", "12"]);
    assert_eq!(r["result"]["euler_factor"]["coefficients"], serde_json::json!(["1", "24", "2048"]));
}

#[test]
fn cache_is_transparent_and_survives_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "g2k", "--k", "6", "--bound", "30"];
    let cold = report(&args);
    let warm = report(&args);
    assert_eq!(cold["result"], warm["result"]);
    assert_eq!(cold["warnings"], warm["warnings"]);
    assert_eq!(cold["result"]["coefficients"][1], "2");

    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), "{ not json").unwrap();
    }
    let out = run(&args);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"], cold["result"]);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    // The rewritten entry is clean again.
    assert_eq!(report(&args)["warnings"], cold["warnings"]);
}

#[test]
fn csv_and_pretty_formats() {
    let out = run(&["--format", "csv", "bernoulli", "--n", "12"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("result,-691/2730"));
    let out = run(&["--format", "pretty", "bernoulli", "--n", "12"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("result") && l.ends_with("-691/2730")));
}

#[test]
fn partial_zeta_two() {
    let r = report(&["euler", "--trivial", "--s", "2", "--cutoff", "1000"]);
    let v: f64 = r["result"]["value"][0].as_str().unwrap().parse().unwrap();
    assert!((v - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-3);
}

#[test]
fn budget_caps_enumeration() {
    let out = run(&["--budget-points", "3", "psd-enum", "--preset", "classical", "--bound", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "Budget");
}
