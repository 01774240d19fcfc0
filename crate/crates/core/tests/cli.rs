mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_whittaker-lab"));
    c.env("WHITTAKER_LAB_THREADS", "2");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().expect("exit code");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("{e}: {stdout} {}", String::from_utf8_lossy(&out.stderr)));
    (code, v)
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    if let Err(e) = common::validate(&common::load_schema(), v) {
        panic!("schema violation: {e}\n{v:#}");
    }
}

#[test]
fn verify_iso_writes_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = run(&["verify-iso", "--n", "2", "--deg", "2", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(String::from_utf8_lossy(&status.stdout).contains("PASS"));
    let v = read(&out);
    assert_valid(&v);
    assert_eq!(v["passed"], true);
    assert_eq!(v["task"], "verify-iso");
    assert_eq!(v["result"]["truncation_rank"]["full_rank"], true);
}

#[test]
fn whittaker_exterior_dimension() {
    let (code, v) = report(&["whittaker", "--n", "2", "--a", "1,2", "--module", "exterior:1", "--deg", "4"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["result"]["dim_wh"], 2);
    assert_eq!(v["result"]["free_basis"]["invertible"], true);
    let trips = &v["result"]["round_trips"];
    assert_eq!(trips["passed"], trips["trials"]);
    // k_m = m! a^m; for m = (1, 1) that is 1 * 2
    let km = v["result"]["km_table"].as_array().unwrap();
    let entry = km.iter().find(|e| e["m"] == serde_json::json!([1, 1])).unwrap();
    assert_eq!(entry["value"], "2");
}

#[test]
fn whittaker_singular_type_skips_free_basis() {
    let (code, v) = report(&["whittaker", "--n", "2", "--a", "0,3", "--deg", "3"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["result"]["dim_wh"], 1);
    assert!(v["result"]["km_table"].is_null());
}

#[test]
fn complex_singular_defect_mode() {
    let (code, v) = report(&["complex", "--n", "1", "--a", "0", "--deg", "3"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["result"]["mode"], "singular_defect");
    assert_eq!(v["result"]["complex"]["stages"][0]["defect"], 1);
}

#[test]
fn complex_exactness_with_probe() {
    let (code, v) = report(&["complex", "--n", "2", "--a", "1,1", "--deg", "3", "--trials", "2", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    let r = &v["result"];
    assert_eq!(r["complex"]["exact"], true);
    for image in r["images"].as_array().unwrap() {
        assert_eq!(image["dim_wh"], image["expected_dim_wh"]);
        assert_eq!(image["cyclicity"]["passed_trials"], 2);
        assert_eq!(image["cyclicity"]["seed"], 5);
    }
}

#[test]
fn bracket_matches_commutator() {
    let (code, v) = report(&["bracket", "--n", "1", "--x", "t1^2*d1", "--y", "d1"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["result"]["bracket"], "-2*t1*d1");
}

#[test]
fn phi_and_decompose_and_omega() {
    let (code, v) = report(&["phi", "--n", "1", "--x", "t1*d1"]);
    assert_eq!(code, 0);
    assert_valid(&v);

    let (code, v) = report(&[
        "decompose", "--n", "2", "--a", "1,-1/2", "--module", "natural", "--poly", "t1*t2 - 3", "--component", "2",
    ]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["result"]["round_trip"], true);
    assert_eq!(v["result"]["leading_index"], serde_json::json!([1, 1]));

    let (code, v) = report(&["omega", "--n", "1", "--a", "2", "--deg", "2", "--m-max", "3"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["result"]["minimal_m"], 2);
}

#[test]
fn weighting_report() {
    let (code, v) = report(&["weighting", "--n", "1", "--a", "1", "--module", "trivial", "--deg", "3", "--grid", "-2:2"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["result"]["uniform_bound"]["uniform"], true);
    assert_eq!(v["result"]["representation"]["grid_size"], 5);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let args = ["whittaker", "--n", "2", "--a", "1,1/2", "--module", "natural", "--deg", "3", "--seed", "9"];
    let (_, mut first) = report(&args);
    let (_, mut second) = report(&args);
    first.as_object_mut().unwrap().remove("timing");
    second.as_object_mut().unwrap().remove("timing");
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "task = \"whittaker\"\nn = 2\na = [\"1\", \"2\"]\nmodule = { type = \"exterior\", k = 1 }\ndegree = 4\ntrials = 3\n",
    )
    .unwrap();
    let (code, v) = report(&["run", "--config", cfg.to_str().unwrap(), "--deg", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["degree"], 2);
    assert_eq!(v["config"]["trials"], 3);
    assert_eq!(v["config"]["module"]["type"], "exterior");
    assert_eq!(v["result"]["dim_wh"], 2);
}

#[test]
fn malformed_rational_is_a_usage_error() {
    let out = run(&["complex", "--n", "2", "--a", "1,1//2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("in a:"), "{err}");
}

#[test]
fn singular_type_rejected_for_decompose() {
    let out = run(&["decompose", "--n", "2", "--a", "1,0", "--poly", "t1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn bad_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "task = \"complex\"\nn = 1\ndeg = \"three\"\n").unwrap();
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn schema_rejects_tampered_report() {
    let (_, mut v) = report(&["bracket", "--n", "1", "--x", "d1", "--y", "t1*d1"]);
    assert_valid(&v);
    v["result"]["bracket"] = Value::from(3);
    assert!(common::validate(&common::load_schema(), &v).is_err());
    v["result"]["bracket"] = Value::from("d1");
    v["config"]["a"] = serde_json::json!(["1.5"]);
    assert!(common::validate(&common::load_schema(), &v).is_err());
}
