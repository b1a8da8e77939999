use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn input(name: &str) -> String {
    root().join("fixtures/inputs").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtrdl")).args(args).env_remove("MTRDL_BUDGET").output().expect("spawn mtrdl")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn matroid_info_reports_rank_and_circuits() {
    let o = run(&["matroid", "info", &input("u23.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["connected"], true);
    assert_eq!(v["circuits"], serde_json::json!([[0, 1, 2]]));
}

#[test]
fn dual_of_u24_is_u24() {
    let o = run(&["matroid", "dual", &input("u24.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["bases"].as_array().unwrap().len(), 6);
}

#[test]
fn msp_of_u23() {
    let o = run(&["poly", "msp", "--matroid", &input("u23.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn triangle_symanzik() {
    let o = run(&["feynman", "symanzik", "--graph", &input("triangle.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["U"], "x12 + x13 + x23");
}

#[test]
fn degenerate_kinematics_is_a_finding() {
    let o = run(&["feynman", "kinematics", "--graph", &input("triangle_bad.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn boolean_jet_count() {
    let o = run(&["jets", "count", "--poly", &input("bool2.json"), "-m", "1", "-p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["count"], 21);
}

#[test]
fn probe_regression() {
    let o = run(&["jets", "probe", "--poly", &input("psi_u23.json"), "-m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let counts: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["count"].as_str().unwrap()).collect();
    assert_eq!(counts, ["99", "725", "2695"]);
}

#[test]
fn budget_overrun_exits_3() {
    let o = run(&["--budget", "10", "jets", "count", "--poly", &input("bool2.json"), "-m", "1", "-p", "3"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_mtrdl"))
        .args(["jets", "count", "--poly", &input("bool2.json"), "-m", "1", "-p", "3"])
        .env("MTRDL_BUDGET", "1e1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn missing_file_exits_2() {
    let o = run(&["matroid", "info", "/nonexistent/m.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn handle_verification() {
    let o = run(&["verify", "handle", "--poly", &input("psi.json"), "--matroid", &input("u24.json"), "--handle", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn certificate_terminates() {
    let o = run(&["fsing", "certify", "--matroid", &input("c4.json"), "-p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.last().unwrap()["kind"], "base-case");
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("mtrdl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("info.json");
    let o = run(&["matroid", "info", &input("u23.json"), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["rank"], 2);
}

#[test]
fn every_fixture_passes() {
    let dir = root().join("fixtures");
    let o = run(&["verify", "all", "--fixtures", dir.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.lines().last().unwrap().ends_with("passed"));
}
