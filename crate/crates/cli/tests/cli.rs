use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(rel: &str) -> PathBuf {
    root().join("fixtures").join(rel)
}

fn uecsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uecsm"))
        .args(args)
        .env_remove("UECSM_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("docs/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
}

/// Parses stdout and checks it against the published schema.
fn json(out: &Output) -> Value {
    let value: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let validator = schema();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    value
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn test_exit_codes_follow_verdict() {
    let e6 = fixture("reference/stump_e6.json");
    let out = uecsm(&["test", path_str(&e6)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("status: UECSM"));

    for name in ["stump_e4", "stump_e5", "stump_e7", "t2", "su22_lsat"] {
        let out = uecsm(&["test", path_str(&fixture(&format!("reference/{name}.json")))]);
        assert_eq!(code(&out), 1, "{name}");
    }
    let out = uecsm(&["test", path_str(&fixture("reference/t1.json"))]);
    assert_eq!(code(&out), 0);
}

#[test]
fn balayan_json_passes_angles_but_not_sat() {
    let out = uecsm(&["--json", "test", path_str(&fixture("reference/balayan.json"))]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["uecsm"], false);
    assert_eq!(v["verdicts"]["wat"]["pass"], true);
    assert_eq!(v["verdicts"]["lsat"]["pass"], true);
    assert_eq!(v["verdicts"]["sat"]["pass"], false);
    assert_eq!(v["conflicts"].as_array().unwrap().len(), 0);
    assert!(v["oracle"].is_null());
}

#[test]
fn oracle_finds_witness_for_symmetric_and_not_for_balayan() {
    let out = uecsm(&["--json", "test", "--oracle", path_str(&fixture("symmetric/symmetric4.json"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["oracle"]["status"], "Witness");

    let out = uecsm(&["--json", "--seed", "3", "test", "--oracle", path_str(&fixture("reference/balayan.json"))]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["oracle"]["status"], "Inconclusive");
    assert!(v["oracle"]["residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn unreadable_or_malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 2, "entries": [[[1, 0]]]}"#).unwrap();
    let out = uecsm(&["test", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    let out = uecsm(&["test", path_str(&dir.path().join("missing.json"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("i/o error"));
}

#[test]
fn tolerance_env_and_overrides() {
    let file = fixture("reference/balayan.json");
    let out = Command::new(env!("CARGO_BIN_EXE_uecsm"))
        .args(["--json", "test", path_str(&file)])
        .env("UECSM_TOL", "1e-5")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["verdicts"]["wat"]["tol"], 1e-5);

    // loosening sat alone makes it pass while the reference still fails: conflict
    let out = uecsm(&["--json", "--tol-sat", "1", "test", path_str(&file)]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["verdicts"]["sat"]["tol"], 1.0);
    assert_eq!(v["verdicts"]["sat"]["pass"], true);
    assert_eq!(v["verdicts"]["wat"]["tol"], 1e-8);
    assert!(!v["conflicts"].as_array().unwrap().is_empty());

    for bad in [["--tol", "-1"], ["--tol-wat", "0"]] {
        let out = uecsm(&[bad[0], bad[1], "test", path_str(&file)]);
        assert_eq!(code(&out), 2, "{bad:?}");
    }
}

#[test]
fn classify_nilpotent_conditions() {
    let out = uecsm(&["--json", "classify-nilpotent", "--params", "2,9,1,0,6,7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["satisfied"], serde_json::json!([2]));
    assert_eq!(v["psi"]["pass"], true);

    let out = uecsm(&["--json", "classify-nilpotent", "--params", "0,0,0,0,0,0"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["satisfied"].as_array().unwrap().len() > 1);

    let out = uecsm(&["--json", "classify-nilpotent", "--params", "1,2,3,1,5,9"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["satisfied"], serde_json::json!([]));
    assert_eq!(v["conflict"], false);

    let out = uecsm(&["classify-nilpotent", "--params", "1,-2:0.5,3,1,5,9"]);
    assert!(matches!(code(&out), 0 | 1));

    let out = uecsm(&["classify-nilpotent", "--params", "1,2,3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn construct_then_test() {
    let dir = tempfile::tempdir().unwrap();

    let out_file = dir.path().join("wns.json");
    let out = uecsm(&["--json", "--seed", "7", "construct", "--sig", "2,2", "--out", path_str(&out_file)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["kind"], "wat_not_sat");
    let out = uecsm(&["--json", "test", path_str(&out_file)]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["verdicts"]["wat"]["pass"], true);
    assert_eq!(v["verdicts"]["sat"]["pass"], false);

    let out_file = dir.path().join("u31.json");
    let out = uecsm(&["--seed", "1", "construct", "--sig", "3,1", "--out", path_str(&out_file)]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&uecsm(&["test", path_str(&out_file)])), 0);

    let out_file = dir.path().join("u12.json");
    let out = uecsm(&["construct", "--sig", "1,2", "--diag", "-1,0,1", "--out", path_str(&out_file)]);
    assert_eq!(code(&out), 0);
    let out = uecsm(&["--json", "test", path_str(&out_file)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["verdicts"]["uecsm_verdict"]["pass"], true);

    // same seed, same bytes
    let again = dir.path().join("u12b.json");
    uecsm(&["construct", "--sig", "1,2", "--diag", "-1,0,1", "--out", path_str(&again)]);
    assert_eq!(std::fs::read(&out_file).unwrap(), std::fs::read(&again).unwrap());

    let out = uecsm(&["construct", "--sig", "2,2", "--diag", "1,1,2,3", "--out", path_str(&dir.path().join("x.json"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn batch_directories() {
    let out = uecsm(&["--json", "batch", path_str(&fixture("reference"))]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["summary"]["files"], 8);
    assert_eq!(v["summary"]["uecsm"], 2);
    assert_eq!(v["summary"]["not_uecsm"], 6);
    assert_eq!(v["summary"]["conflicts"], 0);
    let files: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["file"].as_str().unwrap()).collect();
    let mut sorted = files.clone();
    sorted.sort();
    assert_eq!(files, sorted);

    let empty = tempfile::tempdir().unwrap();
    let out = uecsm(&["--json", "batch", path_str(empty.path())]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["summary"]["files"], 0);

    let mixed = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("reference/t1.json"), mixed.path().join("t1.json")).unwrap();
    std::fs::write(mixed.path().join("broken.json"), "{").unwrap();
    std::fs::write(mixed.path().join("notes.txt"), "ignored").unwrap();
    let out = uecsm(&["--json", "batch", path_str(mixed.path())]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["summary"]["files"], 2);
    assert_eq!(v["summary"]["errors"], 1);
    assert_eq!(v["entries"][0]["file"], "broken.json");
    assert!(v["entries"][0]["report"].is_null());

    let text = uecsm(&["batch", path_str(&fixture("constructed"))]);
    assert_eq!(code(&text), 0);
    assert!(String::from_utf8_lossy(&text.stdout).contains("3 files"));

    assert_eq!(code(&uecsm(&["batch", "/definitely/not/here"])), 2);
}

#[test]
fn schema_rejects_wrong_shapes() {
    let validator = schema();
    assert!(!validator.is_valid(&serde_json::json!({"uecsm": "yes"})));
    let matrix_schema: Value =
        serde_json::from_str(&std::fs::read_to_string(root().join("docs/matrix.schema.json")).unwrap()).unwrap();
    let matrix = jsonschema::validator_for(&matrix_schema).unwrap();
    for entry in std::fs::read_dir(fixture("reference")).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        assert!(matrix.is_valid(&serde_json::from_str(&text).unwrap()));
    }
    assert!(!matrix.is_valid(&serde_json::json!({"n": 1, "entries": [[[1, 0, 0]]]})));
}
