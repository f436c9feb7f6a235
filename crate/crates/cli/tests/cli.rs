use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wedgelab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wedgelab-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn strip_header(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("header");
    v
}

fn all_pass(v: &Value) -> bool {
    v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true)
}

#[test]
fn euler_check_for_h() {
    let out = run(&["euler", "check", "--algebra", "sl2", "--element", "h"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["is_euler"], true);
    assert_eq!(v["grading_dims"], serde_json::json!([1, 1, 1]));
    assert!(v["header"]["timestamp"].is_u64());
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn nilpotent_is_not_euler_and_exits_one() {
    let out = run(&["euler", "check", "--algebra", "sl2", "--element", "e"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["is_euler"], false);
}

#[test]
fn coefficient_input() {
    let out = run(&["euler", "check", "--algebra", "sl2", "--coeffs", "2,0,0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["euler", "check", "--algebra", "sl2", "--coeffs", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wedge_sample_csv_is_deterministic() {
    let a = scratch("wedge-a.csv");
    let b = scratch("wedge-b.csv");
    let args = ["wedge", "sample", "--space", "ds", "--dim", "2", "--count", "10000", "--seed", "7"];
    let out = bin().args(args).arg("--csv").arg(&a).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(args)
        .arg("--csv")
        .arg(&b)
        .env("WEDGELAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let ta = fs::read_to_string(&a).unwrap();
    assert_eq!(ta, fs::read_to_string(&b).unwrap());
    let mut rdr = csv::Reader::from_path(&a).unwrap();
    let head = rdr.headers().unwrap().clone();
    assert_eq!(
        head.iter().collect::<Vec<_>>(),
        ["model", "d", "x0", "x1", "x2", "label", "margin"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 10000);
    for row in rows.iter().take(50) {
        assert_eq!(&row[0], "ds");
        for field in [&row[2], &row[3], &row[4], &row[6]] {
            let x: f64 = field.parse().unwrap();
            assert_eq!(format!("{x:?}"), field);
        }
    }
}

#[test]
fn reports_are_identical_apart_from_header() {
    let args = ["modular", "roundtrip", "--count", "20", "--seed", "3"];
    let a = strip_header(report(&run(&args)));
    let b = strip_header(report(&run(&args)));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a["config"]["seed"], 3);
    assert_eq!(a["config"]["tolerance"], 1e-9);
}

#[test]
fn strip_membership_command() {
    let csv = scratch("strip-values.csv");
    let out = bin()
        .args(["membership", "strip", "--support", "-1", "1", "--nodes", "2048", "--csv"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let m = &v["membership"];
    assert!(m["residual"].as_f64().unwrap() <= 1e-6);
    assert_eq!(m["verdict"], true);
    for key in ["model", "phase", "support", "nodes"] {
        assert!(m.get(key).is_some());
    }
    let rows = csv::Reader::from_path(&csv).unwrap().records().count();
    assert_eq!(rows, 32);
}

#[test]
fn halfplane_membership_controls() {
    let out = run(&["membership", "halfplane", "--support", "1", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["membership", "halfplane", "--support", "1", "2", "--phase", "one"]);
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    assert!(v["membership"]["residual"].as_f64().unwrap() >= 0.5);
    let out = run(&["membership", "halfplane", "--support", "-2", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["membership", "halfplane", "--support", "0", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_tracks_checks() {
    for args in [
        vec!["algebra", "check", "--algebra", "sl2"],
        vec!["grading", "--algebra", "so1,3", "--element", "euler"],
        vec!["kernel", "gram"],
        vec!["kernel", "identities", "--model", "halfplane"],
        vec!["kms", "sample", "--count", "100"],
        vec!["semigroup", "--count", "100"],
        vec!["cone"],
        vec!["euler", "check", "--algebra", "sl2", "--element", "f"],
    ] {
        let out = run(&args);
        let v = report(&out);
        assert_eq!(out.status.code() == Some(0), all_pass(&v), "{args:?}");
        assert_eq!(v["pass"].as_bool().unwrap(), all_pass(&v));
    }
}

#[test]
fn grading_dims_for_boost() {
    let v = report(&run(&["grading", "--algebra", "so1,4", "--element", "euler"]));
    assert_eq!(v["dims"]["1"], 3);
    assert_eq!(v["dims"]["-1"], 3);
}

#[test]
fn report_file_output() {
    let path = scratch("report.json");
    let out = bin()
        .args(["kernel", "identities", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "kernel identities");
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["algebra", "check", "--algebra", "e8"]).status.code(), Some(2));
    let out = run(&["validate", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let bad = scratch("malformed.json");
    fs::write(&bad, "{\"name\": ").unwrap();
    assert_eq!(bin().arg("validate").arg(&bad).output().unwrap().status.code(), Some(2));
    assert_eq!(
        bin().args(["algebra", "check", "--file"]).arg(&bad).output().unwrap().status.code(),
        Some(2)
    );
}

#[test]
fn validate_documents() {
    let good = scratch("sl2.json");
    fs::write(&good, wedgelab::lie::builtin::sl2().to_document().to_json()).unwrap();
    let out = bin().arg("validate").arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");

    let dependent = scratch("dependent.json");
    fs::write(
        &dependent,
        r#"{"name":"bad","matrix_size":2,"basis":[[1,0,0,-1],[2,0,0,-2]]}"#,
    )
    .unwrap();
    let out = bin().arg("validate").arg(&dependent).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("rank"));

    let pair = scratch("pair.json");
    fs::write(
        &pair,
        r#"{"n":2,"lambdas":[2.0,2.0],"pairing":[1,0],"J_convention":"swap-conjugate"}"#,
    )
    .unwrap();
    let out = bin().arg("validate").arg(&pair).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("$.lambdas[0]"));

    let ok_pair = scratch("pair-ok.json");
    fs::write(
        &ok_pair,
        r#"{"n":2,"lambdas":[2.0,0.5],"pairing":[1,0],"J_convention":"swap-conjugate"}"#,
    )
    .unwrap();
    let rep = scratch("validate.json");
    let out = bin().arg("validate").arg(&ok_pair).arg("--out").arg(&rep).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["kind"], "modular_pair");
}
