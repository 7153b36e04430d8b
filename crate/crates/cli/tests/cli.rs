//! End-to-end tests that drive the compiled `witt` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn witt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witt"))
        .args(args)
        .output()
        .expect("the binary should run")
}

fn witt_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witt"))
        .args(args)
        .env(key, value)
        .output()
        .expect("the binary should run")
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_str(stdout_text(out).trim()).expect("stdout should be one JSON document")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("witt-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).expect("temp dir should be writable");
    dir
}

#[test]
fn ghost_prints_exact_components() {
    let out = witt(&["ghost", "--S", "1,2,3", "--coords", "2,0,0"]);
    assert!(out.status.success());
    assert_eq!(stdout_text(&out), "{\"ghost\":[\"2\",\"4\",\"8\"]}\n");
}

#[test]
fn product_of_verschiebung_classes() {
    let out = witt(&["mul", "--S", "1,2,3,6", "--a", "V2", "--b", "V3"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["coords"]["6"], "1");
    assert_eq!(doc["coords"]["1"], "0");
    assert_eq!(doc["coords"]["2"], "0");
    assert_eq!(doc["coords"]["3"], "0");
}

#[test]
fn frobenius_lands_on_the_quotient_set() {
    let out = witt(&["frob", "--S", "1,2,3,6", "-n", "2", "--x", "1,1,0,1"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["S"], serde_json::json!([1, 3]));
}

#[test]
fn domain_errors_exit_with_code_two() {
    let out = witt(&["unghost", "--S", "1,2", "--components", "0,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "NotGhostIntegral");

    let out = witt(&["ghost", "--S", "2,4", "--coords", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "NotDivisorClosed");

    let out = witt(&["restrict", "--S", "1,2,3,6", "-T", "1,5", "--x", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["kind"], "NotSubset");
}

#[test]
fn zbasis_prints_both_forms() {
    let out = witt(&["zbasis", "--S", "1,2,3,6", "--coords", "1,2,0,1"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["coords"]["2"], "2");
    assert_eq!(doc["vbasis"]["6"], "3");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let first = witt(&["eps", "-p", "2", "--S", "1,2,3,4,6"]);
    let second = witt(&["eps", "-p", "2", "--S", "1,2,3,4,6"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn cap_env_gates_table_arithmetic() {
    let args = ["mul", "--ring", "zmod:4", "--S", "1,2,3,6", "--a", "1,1,1,1", "--b", "1,0,1,0"];
    let capped = witt_with_env(&args, "WITT_MAX_N", "4");
    assert_eq!(capped.status.code(), Some(2));
    assert_eq!(stdout_json(&capped)["error"]["kind"], "CapExceeded");

    let uncapped = witt(&args);
    assert!(uncapped.status.success());
    assert_eq!(stdout_json(&uncapped)["coords"]["6"], "3");
}

#[test]
fn phimod_files_round_trip() {
    let dir = scratch_dir("phimod");
    let tate = dir.join("tate.json");
    let dual = dir.join("dual.json");

    let out = witt(&["phimod", "make", "--kind", "tate", "--twist=-1", "--S", "1,2,3,4,6"]);
    assert!(out.status.success());
    fs::write(&tate, out.stdout).expect("object file should be writable");
    let tate_arg = format!("@{}", tate.display());

    let out = witt(&["phimod", "validate", "--object", &tate_arg]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["violations"], serde_json::json!([]));

    let out = witt(&["phimod", "dual", "--object", &tate_arg]);
    assert!(out.status.success());
    fs::write(&dual, out.stdout).expect("object file should be writable");
    let dual_arg = format!("@{}", dual.display());

    let out = witt(&["phimod", "tensor", "--a", &tate_arg, "--b", &dual_arg]);
    assert!(out.status.success());
    let product = stdout_text(&out);
    let out = witt(&["phimod", "validate", "--object", product.trim()]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["pass"], true);

    let out = witt(&["phimod", "tangent", "--object", &tate_arg]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["rank"], 1);
    assert_eq!(doc["ring"]["kind"], "z");

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_suite_reports_and_passes() {
    let out = witt(&["verify", "--suite", "ghost", "--max", "6"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["suites"][0]["suite"], "ghost");
    assert_eq!(doc["suites"][0]["failures"], 0);
}
