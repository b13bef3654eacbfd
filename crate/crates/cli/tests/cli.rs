use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn slopecalc(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_slopecalc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn on_fixture(cmd: &str, name: &str) -> (i32, Value) {
    let path = fixture(name);
    let out = slopecalc(&[cmd, "--input", path.to_str().unwrap()], "");
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn wa_diag_example() {
    let (code, v) = on_fixture("wa", "wa__diag_true.json");
    assert_eq!(code, 0);
    assert_eq!(v["status"], "certified-true");
}

#[test]
fn newton_of_x2_minus_p() {
    let (code, v) = on_fixture("newton", "newton__x2_minus_p.json");
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!([["1/2", 2]]));
}

#[test]
fn battery_failure_case() {
    let (code, v) = on_fixture("battery", "battery__failure.json");
    assert_eq!(code, 1);
    for key in ["verdict_a", "verdict_b", "verdict_cprime", "verdict_d"] {
        assert_eq!(v[key]["status"], "certified-false", "{key}");
    }
    assert_eq!(v["consistent"], true);
}

#[test]
fn stdin_is_the_default_input() {
    let out = slopecalc(&["newton"], r#"{"p": 2, "coeffs": ["2", "0", "0", "1"]}"#);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, serde_json::json!([["1/3", 3]]));
}

#[test]
fn malformed_json_reports_position() {
    let out = slopecalc(&["newton"], "{\"p\": 3,\n \"coeffs\": [1, }");
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "syntax");
    assert_eq!(e["error"]["line"], 2);
    assert!(e["error"]["column"].as_u64().is_some());
}

#[test]
fn schema_errors_are_input_errors() {
    let out = slopecalc(&["hodge"], r#"{"colors": [1]}"#);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_json(&out)["error"]["message"].is_string());
    let out = slopecalc(&["newton"], r#"{"p": 4, "coeffs": ["1", "1"]}"#);
    assert_eq!(out.status.code(), Some(3));
    stderr_json(&out);
}

#[test]
fn missing_file_is_an_input_error() {
    let out = slopecalc(&["newton", "--input", "/nonexistent/input.json"], "");
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["kind"], "io");
}

#[test]
fn plot_emits_svg() {
    let path = fixture("plot__filtered.json");
    let out = slopecalc(&["plot", "--input", path.to_str().unwrap()], "");
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 2);
    let json = slopecalc(&["plot", "--format", "json", "--input", path.to_str().unwrap()], "");
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert!(v["newton"]["vertices"].is_array() && v["hodge"]["vertices"].is_array());
}

#[test]
fn svg_only_for_plot() {
    let out = slopecalc(&["newton", "--format", "svg"], r#"{"p": 3, "coeffs": ["-3", "0", "1"]}"#);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn mv_violations_name_their_nodes() {
    let path = fixture("mv-check__violation.json");
    let out = slopecalc(&["mv-check", "--input", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(3));
    let e = stderr_json(&out);
    let idx: Vec<u64> = e["error"]["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["index"].as_u64().unwrap())
        .collect();
    assert_eq!(idx, vec![1, 2]);
}
