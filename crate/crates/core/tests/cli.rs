use std::fs;
use std::process::{Command, Output};

fn gl3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gl3-hecke"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn verify_hecke_lists_its_checks() {
    let out = gl3(&["verify", "--suite", "hecke", "--tol", "1e-8", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["status"], "pass");
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["hecke_residual", "mobius_expand"]);
}

#[test]
fn kato_anchor() {
    let out = gl3(&["kato", "--l1", "1", "--l2", "1", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let d = &json(&out)["details"];
    assert_eq!(d["lhs"], 0.75);
    assert!((d["rhs"].as_f64().unwrap() - 0.75).abs() <= 1e-6);
    assert!(d["diff"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn failing_check_exits_one() {
    let out = gl3(&["kato", "--l1", "2", "--l2", "1", "--p", "3", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "fail");
}

#[test]
fn configuration_errors_exit_two_and_name_the_field() {
    let out = gl3(&["--tol", "-1", "verify", "--suite", "schur"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`tol`"));

    let out = gl3(&["signs", "--X", "1000", "--H", "3", "--M", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`M`"));

    let out = gl3(&["signs", "--source", "seqcsv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`input`"));
}

#[test]
fn signs_on_generated_tau() {
    let out = gl3(&["signs", "--source", "sym2-tau", "--X", "10000", "--H", "auto"]);
    assert_eq!(out.status.code(), Some(0));
    let d = &json(&out)["details"];
    assert_eq!(d["scan"]["H"], 5);
    assert!(d["scan"]["with_change"].as_u64().unwrap() <= d["scan"]["total_x"].as_u64().unwrap());
    assert!(d["sign_changes"]["changes"].as_u64().unwrap() > 0);
}

#[test]
fn file_sources_agree_with_the_generator() {
    let dir = tempfile::tempdir().unwrap();
    let gl2 = dir.path().join("tau.csv");
    let seq = dir.path().join("seq.csv");
    let gl2_path = gl2.to_str().unwrap();
    let seq_path = seq.to_str().unwrap();
    assert_eq!(gl3(&["gen", "tau-gl2", "--size", "3000", "--data", gl2_path]).status.code(), Some(0));
    assert_eq!(gl3(&["gen", "sym2-tau", "--size", "3000", "--data", seq_path]).status.code(), Some(0));

    let a = gl3(&["signs", "--source", "gl2csv", "--input", gl2_path, "--X", "1000"]);
    let b = gl3(&["signs", "--source", "seqcsv", "--input", seq_path, "--X", "1000"]);
    let c = gl3(&["signs", "--X", "1000"]);
    assert_eq!(a.status.code(), Some(0));
    let (a, b, c) = (json(&a), json(&b), json(&c));
    assert_eq!(a["details"]["scan"], b["details"]["scan"]);
    assert_eq!(a["details"]["scan"], c["details"]["scan"]);
    assert_eq!(a["details"]["sign_changes"], c["details"]["sign_changes"]);
}

#[test]
fn ingest_errors_report_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "p,lambda\n2,0.5\n3,oops\n").unwrap();
    let out = gl3(&["signs", "--source", "gl2csv", "--input", path.to_str().unwrap(), "--X", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn reports_are_reproducible_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["mvt", "--N", "64", "--T", "64", "--draws", "3", "--seed", "11"];
    let first = gl3(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let second = gl3(&with_out);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read(&path).unwrap(), first.stdout);
}
