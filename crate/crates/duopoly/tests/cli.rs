//! End-to-end checks of the compiled binary: example invocations, exit
//! codes, output determinism, and the grid-size environment override.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duopoly")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn buyer_example_picks_alice_first() {
    let out = run(&[
        "buyer",
        "--alice",
        r#"{"lottery":{"z":0.5,"p":0.5}}"#,
        "--bob",
        r#"{"fixed_price":0.8}"#,
        "--v",
        "1.0",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["order"], "alice-first");
    assert_eq!(v["pay_alice"].as_f64().unwrap(), 0.25);
}

#[test]
fn posted_price_sweep_csv_rows() {
    let out = run(&[
        "sweep",
        "posted-price",
        "--alice",
        r#"{"lottery":{"z":0.5,"p":0.5}}"#,
        "--dist",
        "uniform01",
        "--csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,rev_bob");
    assert!(lines.contains(&"0.3,0.21"));
    assert!(lines.contains(&"0.7,0.105"));
}

#[test]
fn verify_example_passes() {
    let out = run(&["verify", "thm-3.1", "--dist", r#"{"family":"uniform","params":[0,1]}"#]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["suite_id"], "thm-3.1");
    assert_eq!(v["cases_run"], v["cases_passed"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "best-response",
        "--alice",
        r#"{"lottery":{"z":0.5,"p":0.25}}"#,
        "--dist",
        "exp1",
        "--search-budget",
        "100",
        "--seed",
        "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    let domain = run(&["dist", "--dist", r#"{"family":"uniform","params":[1,0]}"#]);
    assert_eq!(domain.status.code(), Some(3));
    assert!(String::from_utf8(domain.stderr).unwrap().starts_with("error:"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn grid_env_var_overrides_quadrature_size() {
    let out = Command::new(env!("CARGO_BIN_EXE_duopoly"))
        .args(["dist", "--dist", "uniform01"])
        .env("DUOPOLY_GRID", "501")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["grid_size"], 501);
}
