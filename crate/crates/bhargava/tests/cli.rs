//! End-to-end checks of the CLI surface: formats, determinism, exit codes.

use std::process::{Command, Output};

fn bhargava(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhargava"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn factorial_brute_text() {
    let out = bhargava(&["factorial", "--set", "Z", "--l", "5", "--mode", "brute"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "120");
}

#[test]
fn factorial_brute_json() {
    let out = bhargava(&[
        "factorial", "--set", "poly:[0,0,1]", "--l", "3", "--mode", "brute", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["brute"]["decimal"], "360");
    assert_eq!(v["brute"]["factors"]["2"], 3);
    assert_eq!(v["stabilized"], true);
}

#[test]
fn factorial_both_agree() {
    let out = bhargava(&[
        "factorial", "--set", "poly:[7,2,6]", "--l", "4", "--mode", "both", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["brute"], v["closed"]);
}

#[test]
fn factorial_closed_rejects_non_quadratic() {
    let out = bhargava(&["factorial", "--set", "Z", "--l", "5", "--mode", "closed"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).is_empty(), "no partial output on error");
}

#[test]
fn psequence_json() {
    let out = bhargava(&[
        "psequence", "--set", "Z", "--prime", "2", "--l", "4", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["psequence"], serde_json::json!([0, 0, 1, 1, 3]));
    assert_eq!(v["stabilized"], true);
}

#[test]
fn closure_case2() {
    let out = bhargava(&[
        "closure", "--poly", "[0,1,2]", "--prime", "2", "--depth", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["case"], "Case2-FullRing");
}

#[test]
fn closure_square_reference_shape() {
    let out = bhargava(&[
        "closure", "--poly", "[0,0,1]", "--prime", "5", "--depth", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["case"], "Case1-OddDepthTower");
    assert_eq!(v["isolated"], serde_json::json!([0]));
}

#[test]
fn constant_daiz() {
    let out = bhargava(&["constant", "daiz", "--prime-bound", "1000"]);
    assert!(out.status.success());
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!(value > 1.2 && value < 1.23);
}

#[test]
fn deterministic_output() {
    let args = [
        "factorial", "--set", "poly:[0,1,3]", "--l", "6", "--mode", "both", "--format", "json",
    ];
    let first = stdout(&bhargava(&args));
    let second = stdout(&bhargava(&args));
    assert_eq!(first, second);
}

#[test]
fn usage_error_exits_2() {
    let out = bhargava(&["factorial", "--l", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_exits_1() {
    let out = bhargava(&["psequence", "--set", "Z", "--prime", "6", "--l", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bhargava(&["constant", "euler"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_constants_passes() {
    let out = bhargava(&["verify", "constants"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS"));
}
