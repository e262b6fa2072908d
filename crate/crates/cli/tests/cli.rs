//! End-to-end tests of the `nbw` binary: golden outputs and exit codes.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the files under `tests/golden/`.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn nbw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbw"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("NBW_SEED")
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str]) -> Value {
    let out = nbw(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &stdout).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {name}"));
    assert_eq!(stdout, expected, "golden mismatch for {name}");
    serde_json::from_str(&stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    nbw(args).status.code().expect("exit code")
}

#[test]
fn splitting_random_cubic() {
    let v = golden("splitting_random_cubic.json", &["splitting", "--random", "3", "3", "--field", "q", "--seed", "7"]);
    assert_eq!(v["outputs"]["result"]["normal_splitting"], serde_json::json!([5, 5]));
    assert_eq!(v["inputs"]["seeds"], serde_json::json!([7]));
}

#[test]
fn splitting_line_file() {
    let v = golden("splitting_line.json", &["splitting", "--curve", "tests/data/line.json"]);
    assert_eq!(v["outputs"]["normal_splitting"], serde_json::json!([1, 1]));
    assert_eq!(v["outputs"]["restricted_tangent_splitting"], serde_json::json!([1, 1, 2]));
}

#[test]
fn splitting_char2_sweep_has_even_parts() {
    let v =
        golden("splitting_quartic_f2.json", &["splitting", "--random", "4", "3", "--field", "f2", "--seed", "0..10"]);
    for r in v["outputs"]["results"].as_array().unwrap() {
        for a in r["result"]["normal_splitting"].as_array().unwrap() {
            assert_eq!(a.as_i64().unwrap() % 2, 0);
        }
    }
}

#[test]
fn seed_from_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_nbw"))
        .args(["splitting", "--random", "3", "3", "--field", "f101"])
        .env("NBW_SEED", "7")
        .output()
        .unwrap();
    let explicit = nbw(&["splitting", "--random", "3", "3", "--field", "f101", "--seed", "7"]);
    assert_eq!(with_env.stdout, explicit.stdout);
}

#[test]
fn classify_verdicts() {
    let v = golden("classify_5_2.json", &["classify", "5", "2"]);
    assert_eq!(v["outputs"]["verdict"], "unstable");
    let v = golden("classify_9_8.json", &["classify", "9", "8", "--char", "0"]);
    assert_eq!(v["outputs"]["verdict"], "stable");
    let v = golden("classify_8_0_char2.json", &["classify", "8", "0", "--char", "2"]);
    assert_eq!(v["outputs"]["verdict"], "unstable");
}

#[test]
fn plan_starts_with_pancake() {
    let v = golden("plan_13_12.json", &["plan", "13", "12"]);
    assert_eq!(v["outputs"]["plan"]["moves"][0]["kind"], "Pancake");
    assert_eq!(v["outputs"]["verified"], true);
}

#[test]
fn modify_jet2_on_cubic() {
    let v = golden(
        "modify_jet2.json",
        &["modify", "--curve", "tests/data/twisted_cubic.json", "--modspec", "tests/data/jet2.json"],
    );
    assert_eq!(v["outputs"]["splitting"], serde_json::json!([4, 4]));
    assert_eq!(v["outputs"]["iterated_agrees"], true);
}

#[test]
fn modify_one_secant() {
    let v = golden(
        "modify_one_secant.json",
        &["modify", "--curve", "tests/data/secant_line.json", "--modspec", "tests/data/one_secant.json"],
    );
    assert_eq!(v["outputs"]["splitting"], serde_json::json!([1, 2]));
}

#[test]
fn nodal_two_components() {
    let v = golden("nodal_two_components.json", &["nodal", "--config", "tests/data/two_components.json"]);
    assert_eq!(v["outputs"]["naive_check"], "stable");
    assert_eq!(v["outputs"]["subbundles"][1]["adjusted_slope"], 8);
}

#[test]
fn verify_char2_has_no_parity_violations() {
    let v = golden("verify_char2.json", &["verify-char2", "--dmax", "8", "--trials", "50"]);
    assert_eq!(v["outputs"]["violations"], 0);
}

#[test]
fn pretty_and_timing_flags() {
    let out = nbw(&["--pretty", "classify", "4", "1", "--char", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n  \"command\": \"classify\""));
    let out = nbw(&["classify", "4", "1", "--timing"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(exit_code(&["splitting", "--curve", "tests/data/basepoint.json"]), 2);
    assert_eq!(exit_code(&["splitting", "--random", "3", "3", "--field", "f6"]), 2);
    assert_eq!(exit_code(&["classify", "3", "1"]), 2);
    assert_eq!(exit_code(&["plan", "2", "0"]), 2);
    assert_eq!(exit_code(&["splitting", "--curve", "tests/data/missing.json"]), 2);
    assert_eq!(
        exit_code(&[
            "modify",
            "--curve",
            "tests/data/twisted_cubic.json",
            "--modspec",
            "tests/data/tangent_target.json"
        ]),
        2
    );
    let out = nbw(&["classify", "3", "1"]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "NotBrillNoether");
}

#[test]
fn engine_errors_exit_with_three() {
    // a scan bound below the generator degrees cannot certify the kernel
    let out = nbw(&["splitting", "--curve", "tests/data/twisted_cubic.json", "--degree-bound", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "BoundExceeded");
}
