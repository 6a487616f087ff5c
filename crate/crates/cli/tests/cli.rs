//! End-to-end tests of the `nevlab` binary: exit codes, report shapes,
//! determinism, and the error JSON contract.

use std::path::Path;
use std::process::{Command, Output};

fn nevlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nevlab"))
        .args(args)
        .env_remove("NEVLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stderr.clone()).expect("utf8 stderr");
    serde_json::from_str(text.lines().last().expect("error line")).expect("stderr is JSON")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is JSON")
}

#[test]
fn analyze_emits_characteristic_csv() {
    let out = nevlab(&["analyze", "exp(z)", "--radii", "1:40:20"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], "r,m,N,T");
    assert_eq!(lines.len(), 21, "header + one row per radius");
    // T(r) = r/π for e^z.
    let last: Vec<f64> = lines[20].split(',').map(|x| x.parse().unwrap()).collect();
    let expected = 40.0 / std::f64::consts::PI;
    assert!((last[3] - expected).abs() / expected < 1e-6, "T(40) = {}", last[3]);
}

#[test]
fn analyze_log_grid_and_json_format() {
    let out = nevlab(&["analyze", "exp(z)", "--radii", "1:100:3:log", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["name"], "analyze");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!((rows[1]["r"].as_f64().unwrap() - 10.0).abs() < 1e-9);
}

#[test]
fn zeros_counts_and_locates() {
    let out = nevlab(&["zeros", "exp(z)-1", "--radius", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["total_count"], 3);
    assert_eq!(v["zeros"].as_array().unwrap().len(), 3);
}

#[test]
fn quotient_entire_instance_is_consistent() {
    let out = nevlab(&["quotient", "exp(2*z)-1", "exp(z)-1", "--radius", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "CONSISTENT");
    assert_eq!(v["certificate"]["verdict"], "EntireUpTo");
    assert_eq!(v["relation"]["relation"], serde_json::json!([1, -2]));
}

#[test]
fn quotient_incommensurable_fails_expect_entire() {
    let args = ["quotient", "exp(sqrt2*z)-1", "exp(z)+1", "--radius", "4"];
    let out = nevlab(&args);
    assert_eq!(out.status.code(), Some(0), "without --expect-entire the report succeeds");
    let v = stdout_json(&out);
    assert_eq!(v["certificate"]["verdict"], "NotEntire");
    let z = v["certificate"]["witnesses"][0]["z"].as_array().unwrap();
    assert!((z[1].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-8);

    let mut with_flag = args.to_vec();
    with_flag.push("--expect-entire");
    let out = nevlab(&with_flag);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_jensen_passes_on_smooth_instance() {
    let out = nevlab(&["verify-jensen", "exp(z)-1", "--radii", "2:6:3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["name"], "jensen");
    assert_eq!(v["pass"], true);
    assert_eq!(v["per_radius"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_fmt_bounds_oscillation() {
    let out = nevlab(&["verify-fmt", "exp(z)", "--target", "1", "--radii", "1:40:8"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["name"], "fmt");
    assert_eq!(v["pass"], true);
}

fn write_instance(dir: &Path, name: &str, body: serde_json::Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&body).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_smt_fixed_lines() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(
        dir.path(),
        "smt.json",
        serde_json::json!({
            "curve": ["1", "exp(z)"],
            "hyperplanes": [["1", "0"], ["0", "1"], ["1", "1"]],
        }),
    );
    let out = nevlab(&["verify-smt", "--instance", &inst, "--eps", "0.5", "--radii", "2:40:8"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["name"], "vojta-smt");
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_moving_smt_and_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(
        dir.path(),
        "moving.json",
        serde_json::json!({
            "curve": ["1", "exp(z)"],
            "hyperplanes": [["1", "0"], ["0", "1"], ["z", "1"]],
            "t": 1,
        }),
    );
    let out = nevlab(&[
        "verify-moving-smt",
        "--instance",
        &inst,
        "--eps",
        "1",
        "--radii",
        "10:20:2",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["name"], "moving-smt");
    assert_eq!(v["pass"], true);

    let out = nevlab(&["verify-moving-smt", "--instance", &inst, "--truncation-at", "10"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["name"], "moving-truncation");
    assert_eq!(v["pass"], true);

    // --radii is mandatory for the proximity inequality.
    let out = nevlab(&["verify-moving-smt", "--instance", &inst]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_borel_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let triple = write_instance(
        dir.path(),
        "triple.json",
        serde_json::json!({ "summands": ["1", "exp(z)-1", "-exp(z)"] }),
    );
    let out = nevlab(&["verify-borel", "--instance", &triple, "--radii", "5:15:2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["pass"], true);

    let pair = write_instance(
        dir.path(),
        "pair.json",
        serde_json::json!({ "summands": ["exp(z)", "-exp(z)"] }),
    );
    let out = nevlab(&["verify-borel", "--instance", &pair, "--radii", "5:15:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["outcome"], "not-applicable");
}

#[test]
fn bounds_reproduce_frozen_oracle() {
    let out = nevlab(&["bounds", "--l", "1", "--m", "2", "--s", "2", "--t", "3", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["M"], 4);
    assert_eq!(v["N1"], 6);
    assert_eq!(v["N2"], 21);
    assert_eq!(v["N"], 48);
    assert_eq!(v["n1"], 19044);

    // Empty ε window maps to a computation failure, exit 1.
    let out = nevlab(&["bounds", "--l", "2", "--m", "2", "--s", "2", "--t", "3", "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "eps-window-empty");
}

#[test]
fn aux_map_reports_structure() {
    let out = nevlab(&["aux-map", "1+exp(2*z)", "1+exp(z)", "--n", "1", "--s", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["name"], "aux-map");
    assert_eq!(v["N"], 7);
    assert_eq!(v["M"], 1);
    assert_eq!(v["quotient"], serde_json::Value::Null);
}

#[test]
fn parse_errors_are_json_with_exit_2() {
    let out = nevlab(&["analyze", "exp(", "--radii", "1:10:3"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stderr_json(&out);
    assert_eq!(v["error"], "parse");
    assert!(v["detail"].as_str().unwrap().contains("parse error"));

    let out = nevlab(&["analyze", "exp(z)", "--radii", "5:1:3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");

    let out = nevlab(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");
}

#[test]
fn missing_instance_file_is_usage_error() {
    let out = nevlab(&["verify-smt", "--instance", "/nonexistent.json", "--radii", "2:4:2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "io");
}

#[test]
fn out_flag_writes_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = nevlab(&[
        "bounds", "--l", "1", "--m", "2", "--s", "2", "--t", "3", "--a", "1", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["n1"], 19044);
    // No temp leftovers.
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name() != "report.json")
        .collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

#[test]
fn reports_are_byte_deterministic() {
    let args = ["verify-fmt", "exp(z)", "--target", "1", "--radii", "2:20:4", "--seed", "7"];
    let a = nevlab(&args);
    let b = nevlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "identical config must give byte-identical JSON");
}

#[test]
fn thread_cap_env_is_honored_and_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_nevlab"))
        .args(["bounds", "--l", "1", "--m", "2", "--s", "2", "--t", "3", "--a", "1"])
        .env("NEVLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = Command::new(env!("CARGO_BIN_EXE_nevlab"))
        .args(["bounds", "--l", "1", "--m", "2", "--s", "2", "--t", "3", "--a", "1"])
        .env("NEVLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "usage");
}
