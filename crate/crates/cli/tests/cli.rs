use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn nefsphere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nefsphere")).args(args).output().expect("run nefsphere")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, contents: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(name);
    fs::write(&path, contents).unwrap();
    (dir, path)
}

#[test]
fn report_on_every_data_file_passes() {
    for name in ["triangle", "plane_pair", "square", "simplex3", "quadric_cubic"] {
        let out = nefsphere(&["report", &data(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["passed"], Value::Bool(true));
    }
}

#[test]
fn stages_stop_where_asked() {
    let out = nefsphere(&["dualize", &data("triangle")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dual"]["parts"], serde_json::json!([[[-2, 1], [1, -2], [1, 1]]]));
    assert!(v["sphere"].is_null());

    let v = json(&nefsphere(&["complex", &data("triangle")]));
    assert_eq!(v["sphere"]["homology"]["betti"], serde_json::json!([1, 1]));
    assert!(v["nabla_omega"].is_null());

    let v = json(&nefsphere(&["tropical", &data("triangle")]));
    assert!(v["nabla_omega"].is_object());
    assert!(v["monodromy"].is_null());

    let v = json(&nefsphere(&["discriminant", &data("simplex3")]));
    assert_eq!(v["discriminant"]["components"].as_array().unwrap().len(), 6);
    assert_eq!(v["discriminant"]["complement"]["homology"]["betti"], serde_json::json!([1, 5, 0]));
}

#[test]
fn fast_verification_skips_the_complement() {
    let v = json(&nefsphere(&["discriminant", &data("simplex3"), "--verify", "fast"]));
    assert_eq!(v["verify"], "fast");
    assert!(v["discriminant"]["complement"].is_null());
}

#[test]
fn validate_reports_reducibility() {
    let out = nefsphere(&["validate", &data("square")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["validation"]["valid"], Value::Bool(true));
    assert_eq!(v["validation"]["irreducible"], Value::Bool(false));
}

#[test]
fn require_irreducible_rejects_the_square() {
    let out = nefsphere(&["report", &data("square"), "--require-irreducible"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_partition_exits_2_with_the_failed_checks() {
    // the parts sum to a square that is not reflexive
    let (_dir, path) = scratch("bad.json", r#"{"dim": 2, "parts": [[[0,0],[2,0]], [[0,0],[0,2]], [[0,0],[-1,-1]]]}"#);
    let out = nefsphere(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["validation"]["valid"], Value::Bool(false));
    let checks = v["validation"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["pass"] == Value::Bool(false)));
}

#[test]
fn malformed_inputs_exit_2() {
    let cases = [
        "{not json",
        r#"{"dim": 2}"#,
        r#"{"dim": 2, "parts": [[[1,0],[0,1],[-1,-1]]], "extra": 1}"#,
        r#"{"dim": 3, "parts": [[[1,0],[0,1],[-1,-1]]]}"#,
    ];
    for text in cases {
        let (_dir, path) = scratch("in.json", text);
        let out = nefsphere(&["report", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
    assert_eq!(nefsphere(&["report", "/nonexistent/input.json"]).status.code(), Some(2));
}

#[test]
fn non_central_weights_exit_2() {
    let (_dir, weights) = scratch("w.json", r#"[{"point": [0, 0], "value": 5}, {"point": [1, 0], "value": 1}, {"point": [0, 1], "value": 1}, {"point": [-1, -1], "value": 1}]"#);
    let out = nefsphere(&["complex", &data("triangle"), "--omega", weights.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn weight_file_overrides_the_input() {
    let (_dir, weights) = scratch("w.json", r#"[{"point": [0, 0], "value": 0}, {"point": [1, 0], "value": "3/2"}, {"point": [0, 1], "value": 1}, {"point": [-1, -1], "value": 1}]"#);
    let out = nefsphere(&["report", &data("triangle"), "--omega", weights.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["m_side"]["weights_all_ones"], Value::Bool(false));
}

#[test]
fn emit_complexes_writes_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = nefsphere(&["report", &data("simplex3"), "--emit-complexes", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["sigma.json", "nabla_omega.json", "discriminant.json", "monodromy.json"] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let _: Value = serde_json::from_str(&text).unwrap();
    }
}

#[test]
fn dual_flag_adds_the_swapped_run() {
    let out = nefsphere(&["monodromy", &data("plane_pair"), "--dual"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dual_run"]["constant_loops"], v["dual_run"]["constant_loops_preserved"]);
    assert!(nefsphere(&["monodromy", &data("plane_pair")]).stdout != out.stdout);
}
