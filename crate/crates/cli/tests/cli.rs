use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use serde_json::Value;
use sptinv_core::group::serialize_group;
use sptinv_core::io::{serialize_pentuple, serialize_triple};
use sptinv_core::*;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sptinv")).current_dir(dir).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn run_json(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, text) = run(dir, &full);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

fn z2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2).unwrap())
}

fn nontrivial_z2() -> Pd0Triple {
    let mut t = Pd0Triple::trivial(&z2(), Z2Hom::zero(2));
    t.c.set(&[1, 1, 1], Doubled::diagonal(Phase::HALF));
    t
}

fn fixture() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("z2.json"), serialize_group(&z2())).unwrap();
    std::fs::write(d.join("trivial.json"), serialize_triple(&Pd0Triple::trivial(&z2(), Z2Hom::zero(2)))).unwrap();
    std::fs::write(d.join("nontrivial.json"), serialize_triple(&nontrivial_z2())).unwrap();
    std::fs::write(d.join("p0.json"), serialize_pentuple(&CrtPentuple::trivial(&z2(), Z2Hom::zero(2)))).unwrap();
    dir
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(xs) => xs.iter().any(has_float),
        Value::Object(m) => m.values().any(has_float),
        _ => false,
    }
}

#[test]
fn classify_reports_count_and_one_digest_per_class() {
    let dir = fixture();
    let (code, v) = run_json(dir.path(), &["classify", "--group", "z2.json", "--a", "0", "--denominator", "8", "--diagonal-only"]);
    assert_eq!(code, 0);
    assert_eq!(v["classCount"], 4);
    assert_eq!(v["classes"].as_array().unwrap().len(), 4);
    assert!(!has_float(&v));
    let (_, with_reps) = run_json(dir.path(), &["classify", "--group", "z2.json", "--diagonal-only", "--representatives"]);
    assert_eq!(with_reps["representatives"].as_array().unwrap().len(), 4);
}

#[test]
fn classify_rejects_bad_inputs() {
    let dir = fixture();
    assert_eq!(run(dir.path(), &["classify", "--group", "z2.json", "--a", "2"]).0, 3);
    let (code, v) = run_json(dir.path(), &["classify", "--group", "z2.json", "--denominator", "12"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "invalid_argument");
}

#[test]
fn reduce_trivial_pentuple_gives_zero_triple() {
    let dir = fixture();
    let (code, v) = run_json(dir.path(), &["reduce", "--in", "p0.json", "--out", "r.json", "--cert", "c.json"]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    for key in ["kappa", "c"] {
        let entries = r[key]["entries"].as_array().unwrap();
        assert!(entries.iter().flat_map(|e| e.as_array().unwrap()).all(|x| x == 0 || x == "0/1"), "{key}: {entries:?}");
    }
}

#[test]
fn equiv_exit_statuses() {
    let dir = fixture();
    let (code, v) = run_json(dir.path(), &["equiv", "--left", "trivial.json", "--right", "trivial.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["mIsZero"], true);
    let (code, v) = run_json(dir.path(), &["equiv", "--left", "trivial.json", "--right", "nontrivial.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["reason"], "c_ratio");
    let (code, v) = run_json(dir.path(), &["equiv", "--left", "trivial.json", "--right", "nontrivial.json", "--budget", "0"]);
    assert_eq!(code, 2, "{v}");
    assert_eq!(v["status"], "budget_exceeded");
}

#[test]
fn violations_name_constraint_and_tuple() {
    let dir = fixture();
    let mut bad = nontrivial_z2();
    bad.c.set(&[1, 1, 1], Doubled::diagonal(Phase::new(1, 4)));
    std::fs::write(dir.path().join("bad.json"), serialize_triple(&bad)).unwrap();
    let (code, v) = run_json(dir.path(), &["validate-triple", "--in", "bad.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["violation"]["constraint"], "c_cocycle");
    assert!(v["violation"]["tuple"].is_array());

    let mut p = synthesize_pentuple(&nontrivial_z2(), &[Bit::ONE, Bit::ZERO]).unwrap();
    let mut e = p.c_r.get(&[1, 1, 1]);
    e.plus = e.plus + Phase::new(1, 8);
    p.c_r.set(&[1, 1, 1], e);
    std::fs::write(dir.path().join("bad_p.json"), serialize_pentuple(&p)).unwrap();
    let (code, v) = run_json(dir.path(), &["validate-crt", "--in", "bad_p.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["violation"]["constraint"], "compatibility");
    assert_eq!(v["violation"]["tuple"], serde_json::json!([1, 1, 1]));
    assert_eq!(run(dir.path(), &["reduce", "--in", "bad_p.json"]).0, 1);
}

#[test]
fn malformed_files_are_input_errors_with_locations() {
    let dir = fixture();
    let d = dir.path();
    let text = std::fs::read_to_string(d.join("nontrivial.json")).unwrap().replace("\"1/2\"", "\"3/6\"");
    std::fs::write(d.join("unreduced.json"), text).unwrap();
    let (code, v) = run_json(d, &["validate-triple", "--in", "unreduced.json"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "parse");
    assert!(v["error"]["location"].as_str().unwrap().starts_with("/c/entries/"), "{v}");

    std::fs::write(d.join("g.json"), r#"{"order": 2, "table": [[1, 0], [0, 1]]}"#).unwrap();
    let (code, v) = run_json(d, &["classify", "--group", "g.json"]);
    assert_eq!(code, 3);
    assert!(v["error"]["message"].as_str().unwrap().contains("identity"), "{v}");
}

#[test]
fn usage_errors_exit_3() {
    let dir = fixture();
    assert_eq!(run(dir.path(), &["no-such-command"]).0, 3);
    assert_eq!(run(dir.path(), &["reduce"]).0, 3);
    assert_eq!(run(dir.path(), &["make-group", "--cyclic", "2", "--trivial", "--out", "x.json"]).0, 3);
    assert_eq!(run(dir.path(), &["--help"]).0, 0);
}

#[test]
fn make_group_and_sample_pipeline() {
    let dir = fixture();
    let d = dir.path();
    assert_eq!(run(d, &["make-group", "--product", "z2.json", "z2.json", "--out", "v4.json"]).0, 0);
    let (code, v) = run_json(d, &["sample", "--group", "v4.json", "--a", "3", "--seed", "1", "--diagonal", "--out", "t.json"]);
    assert_eq!((code, &v["diagonal"]), (0, &Value::Bool(true)));
    assert_eq!(run(d, &["synthesize", "--triple", "t.json", "--b", "0110", "--out", "p.json"]).0, 0);
    assert_eq!(run(d, &["synthesize", "--triple", "t.json", "--b", "01"]).0, 3);
    assert_eq!(run(d, &["validate-crt", "--in", "p.json"]).0, 0);
    assert_eq!(run(d, &["reduce", "--in", "p.json", "--out", "r.json"]).0, 0);
    assert_eq!(run(d, &["equiv", "--left", "r.json", "--right", "t.json"]).0, 0);
    let (code, v) = run_json(d, &["validate-triple", "--in", "r.json", "--diagonal-class"]);
    assert_eq!((code, &v["diagonalClass"]), (0, &Value::Bool(true)));
}

#[test]
fn timing_only_with_flag() {
    let dir = fixture();
    let (_, v) = run_json(dir.path(), &["validate-triple", "--in", "trivial.json"]);
    assert!(v.get("elapsedMs").is_none());
    let (_, v) = run_json(dir.path(), &["--timing", "validate-triple", "--in", "trivial.json"]);
    assert!(v["elapsedMs"].is_u64());
}

#[test]
fn worker_count_from_environment() {
    let dir = fixture();
    let bin = env!("CARGO_BIN_EXE_sptinv");
    let go = |w: &str| {
        Command::new(bin)
            .current_dir(dir.path())
            .env("PD0_WORKERS", w)
            .args(["--format", "json", "classify", "--group", "z2.json", "--diagonal-only"])
            .output()
            .unwrap()
    };
    let one = go("1");
    let four = go("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(go("zero").status.code(), Some(3));
}
