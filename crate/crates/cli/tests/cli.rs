use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imset-kit")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn json_output_carries_schema() {
    let v = json_of(&kit(&["config", "--n", "3"]));
    assert_eq!(v["schema"], "imset-kit/1");
    assert_eq!(v["matrix"].as_array().unwrap().len(), 8);
    assert_eq!(v["columns"].as_array().unwrap().len(), 6);
}

#[test]
fn face_of_ab_given_cd() {
    let v = json_of(&kit(&["face", "a|b|cd", "--n", "4"]));
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["orthogonal_functions"].as_array().unwrap().len(), 15);
    assert_eq!(v["extreme_rays"], serde_json::json!(["a|b|cd"]));
}

#[test]
fn ci_model_of_example_imset_excludes_a_b_cd() {
    let dir = tempfile::tempdir().unwrap();
    let u = imset::verify::example_imset().to_json().to_string();
    let path = write(dir.path(), "example.json", &u);
    let v = json_of(&kit(&["ci-model", "--imset", &path]));
    let stmts: Vec<&str> = v["statements"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    for s in ["c|d|ab", "a|b|0", "a|b|c", "a|b|d"] {
        assert!(stmts.contains(&s), "{stmts:?}");
    }
    assert!(!stmts.contains(&"a|b|cd"));
}

#[test]
fn ci_model_of_distribution_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p.csv", "a,b,p\n0,0,0.12\n0,1,0.28\n1,0,0.18\n1,1,0.42\n");
    let v = json_of(&kit(&["ci-model", "--dist", &path]));
    assert_eq!(v["statements"], serde_json::json!(["a|b|0"]));
}

#[test]
fn constructed_functions_round_trip_through_skeletal() {
    let dir = tempfile::tempdir().unwrap();
    let out = kit(&["construct", "--family", "max-k", "--n", "4", "--k", "2"]);
    let f = write(dir.path(), "f.json", &String::from_utf8(out.stdout).unwrap());
    assert_eq!(json_of(&kit(&["skeletal", &f]))["skeletal"], true);
    let out = kit(&["construct", "--family", "zero-slice", &f]);
    let h = write(dir.path(), "h.json", &String::from_utf8(out.stdout).unwrap());
    let v = json_of(&kit(&["skeletal", &h]));
    assert_eq!(v["skeletal"], true);
    assert_eq!(v["tight_rank"], v["required_rank"]);
}

#[test]
fn check_supermodular_reports_violation() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", r#"{"a": 1, "b": 1, "ab": "1/2"}"#);
    let v = json_of(&kit(&["check-supermodular", &f]));
    assert_eq!(v["supermodular"], false);
    assert_eq!(v["violation"]["triplet"], "a|b|0");
    assert_eq!(v["violation"]["value"], "-3/2");
}

#[test]
fn decompose_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let out = kit(&["decompose", "ab|cd|0"]);
    let v = json_of(&out);
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
    let p = write(dir.path(), "u.json", &String::from_utf8(out.stdout).unwrap());
    let c = json_of(&kit(&["classify-imset", &p]));
    assert_eq!(c["class"], "combinatorial");
    assert_eq!(c["degree"], 4);
}

#[test]
fn closure_and_reduce() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", r#"["a|b|c", "a|c|0"]"#);
    let v = json_of(&kit(&["closure", &s]));
    assert!(v["statements"].as_array().unwrap().contains(&"a|bc|0".into()));
    let m = write(
        dir.path(),
        "m.json",
        r#"{"lhs": {"a|b|0": 1, "a|c|b": 1}, "rhs": {"a|c|0": 1, "a|b|c": 1}}"#,
    );
    let v = json_of(&kit(&["reduce", &m]));
    assert_eq!(v["combination"].as_array().unwrap().len(), 1);
}

#[test]
fn relations_k2_are_all_semigraphoid() {
    let v = json_of(&kit(&["relations", "--n", "4", "--k", "2", "--degree-max", "2", "--coeff-bound", "1"]));
    let rels = v["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 24);
    assert!(rels.iter().all(|r| r["classification"] == "two-by-two-semigraphoid"));
}

#[test]
fn markov_sub_configuration() {
    let v = json_of(&kit(&["markov", "--n", "4", "--degree-cap", "4", "--sub", "ab|cd|0"]));
    assert_eq!(v["sub"], "ab|cd|0");
    assert_eq!(v["complete"], false);
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["relations", "--n", "4", "--k", "3", "--degree-max", "5", "--coeff-bound", "2"];
    let one = kit(&[&["--threads", "1"][..], &args[..]].concat());
    let four = kit(&[&["--threads", "4"][..], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let m1 = kit(&["--threads", "1", "markov", "--n", "4", "--degree-cap", "4"]);
    let m4 = kit(&["--threads", "4", "markov", "--n", "4", "--degree-cap", "4"]);
    assert_eq!(m1.stdout, m4.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(kit(&["face", "a|b|cd", "--n", "3"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(kit(&["classify-imset", &bad]).status.code(), Some(2));
    assert_eq!(kit(&["markov", "--n", "5", "--degree-cap", "4", "--memory-mib", "1"]).status.code(), Some(3));
    let u = write(dir.path(), "u.json", r#"{"abcd": 1, "0": 1, "ab": -1, "cd": -1}"#);
    assert_eq!(kit(&["classify-imset", &u, "--budget", "1"]).status.code(), Some(3));
    assert_eq!(kit(&["classify-imset", &u]).status.code(), Some(0));
}

#[test]
fn text_format_uses_delta_notation() {
    let out = kit(&["--format", "text", "decompose", "a|b|0", "--n", "2"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("δ_ab - δ_b - δ_a + δ_0"), "{s}");
}

#[test]
fn quick_verify_passes() {
    let v = json_of(&kit(&["verify", "--suite", "quick"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 15);
}
