use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_braidosc"))
        .args(args)
        .env_remove("BRAIDOSC_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn entries(v: &Value) -> Vec<Vec<f64>> {
    v.as_array().unwrap().iter().map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()).collect()
}

fn close(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(r, s)| r.len() == s.len() && r.iter().zip(s).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs())))
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["matrix", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["matrix", "--n", "3", "--N", "1", "--het", "--backend", "exact"]).status.code(), Some(2));
    assert_eq!(run(&["matrix", "--n", "3", "--N", "1", "--q", "1"]).status.code(), Some(2));
    assert_eq!(run(&["matrix", "--n", "3", "--N", "1", "--formula", "printed"]).status.code(), Some(2));
    assert_eq!(run(&["word", "--n", "3", "--N", "1", "--word", "3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_braidosc"))
        .args(["matrix", "--n", "3", "--N", "1"])
        .env("BRAIDOSC_PRECISION", "18")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn output_is_byte_stable() {
    let args = ["matrix", "--n", "4", "--N", "2", "--het", "--q", "0.45"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let exact = ["matrix", "--n", "4", "--N", "2", "--backend", "exact"];
    assert_eq!(run(&exact).stdout, run(&exact).stdout);
}

#[test]
fn braid_relation_through_words() {
    let base = ["word", "--n", "3", "--N", "2", "--het", "--q", "0.7"];
    let a = json(&[&base[..], &["--word", "1 2 1"]].concat());
    let b = json(&[&base[..], &["--word", "2 1 2"]].concat());
    assert!(close(&entries(&a["entries"]), &entries(&b["entries"]), 1e-10));

    let exact = ["word", "--n", "4", "--N", "2", "--backend", "exact"];
    let a = json(&[&exact[..], &["--word", "2 3 2"]].concat());
    let b = json(&[&exact[..], &["--word", "3 2 3"]].concat());
    assert_eq!(a["entries"], b["entries"]);
}

#[test]
fn word_and_inverse_give_identity() {
    let v = json(&["word", "--n", "3", "--N", "2", "--het", "--word", "1 -1"]);
    let m = entries(&v["entries"]);
    let id: Vec<Vec<f64>> = (0..m.len()).map(|i| (0..m.len()).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    assert!(close(&m, &id, 1e-10));
}

#[test]
fn burau_trace_by_hand() {
    // sigma_1 = [[-x^2, x], [0, 1]] on the n = 3 Burau block, so
    // tr(sigma_1^2) = x^4 + 1 with x = q^{-gamma}.
    let v = json(&["word", "--n", "3", "--N", "1", "--word", "1 1", "--backend", "exact"]);
    assert_eq!(v["trace"], "x^4 + 1");
    let v = json(&["word", "--n", "3", "--N", "1", "--word", "1 1", "--q", "0.6"]);
    let x = 0.6f64.powf(-1.0);
    assert!((v["trace"].as_f64().unwrap() - (x.powi(4) + 1.0)).abs() < 1e-12);
    assert_eq!(v["phase"]["exponent"], "2/1");
}

#[test]
fn routes_agree_on_the_command_line() {
    let base = ["matrix", "--n", "4", "--N", "2", "--het", "--q", "0.55"];
    let a = json(&[&base[..], &["--route", "direct"]].concat());
    let b = json(&[&base[..], &["--route", "rewrite"]].concat());
    for (x, y) in a["matrices"].as_array().unwrap().iter().zip(b["matrices"].as_array().unwrap()) {
        assert!(close(&entries(&x["entries"]), &entries(&y["entries"]), 1e-8));
    }
    assert_eq!(a["basis"], b["basis"]);
}

#[test]
fn dims_table() {
    let out = run(&["dims", "--n", "3", "--N", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("N_(n,N) = 10"));
    assert_eq!(text.lines().filter(|l| l.contains("c+3")).count(), 4);
    let v = json(&["dims", "--n", "4", "--N", "3", "--format", "json"]);
    assert_eq!(v["weight_dim"], 20);
    assert_eq!(v["lowest_dims"], serde_json::json!([1, 3, 6, 10]));
}

#[test]
fn csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let out = run(&["matrix", "--n", "3", "--N", "1", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# lossy"));
    assert_eq!(lines.next().unwrap(), "generator,row,col,entry");
    assert_eq!(lines.count(), 2 * 2 * 2);
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["verify", "--suite", "spaces", "--seed", "9", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["seed"], 9);
}
