use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn expsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expsub"))
        .args(args)
        .env_remove("EXPSUB_PRECISION")
        .output()
        .expect("run expsub")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn count_tables_match_golden() {
    for (fixture, file) in [
        ("times2times3", "times2times3_counts.csv"),
        ("ledrappier", "ledrappier_counts.csv"),
    ] {
        let o = expsub(&["periodic", fixture, "--range", "-5..5,0..5"]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), golden(file), "{fixture}");
    }
}

#[test]
fn long_and_json_layouts() {
    let o = expsub(&["periodic", "times2times3", "--range", "0..1,0..1", "--layout", "long"]);
    assert_eq!(stdout(&o), "n1,n2,j,count\n0,0,1,inf\n0,1,1,1\n1,0,1,1\n1,1,1,5\n");

    let v = json(&expsub(&[
        "periodic", "ledrappier", "--range", "-1..1,0..0", "-j", "2", "--format", "json",
    ]));
    assert_eq!(v["convention"], "inverse-root");
    assert_eq!(v["descriptor_hash"].as_str().unwrap().len(), 64);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    let zero = entries.iter().find(|e| e["n"] == serde_json::json!([0, 0])).unwrap();
    assert_eq!(zero["count"], Value::Null);
    assert_eq!(zero["infinite"], true);
    // F_(2,0) for Ledrappier is 2^{2-2} = 1
    let one = entries.iter().find(|e| e["n"] == serde_json::json!([1, 0])).unwrap();
    assert_eq!(one["count"], 1);
}

#[test]
fn zeta_report() {
    let v = json(&expsub(&["zeta", "times2times3", "--n", "1,1", "--jmax", "10"]));
    assert_eq!(v["expansive"], "true");
    assert_eq!(v["convention"], "inverse-root");
    assert!(v["descriptor_hash"].is_string());
    let mut cs: Vec<(String, i64)> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["c_exact"].as_str().unwrap().to_string(), f["lambda"].as_i64().unwrap()))
        .collect();
    cs.sort();
    assert_eq!(cs, vec![("1".to_string(), 1), ("6".to_string(), -1)]);
    assert_eq!(v["verification"]["passed"], true);

    let r = json(&expsub(&["zeta", "times2times3", "--n", "1,1", "--convention", "root-location"]));
    assert_eq!(r["convention"], "root-location");
    assert!(r["factors"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f["c_exact"] == "1/6"));
}

#[test]
fn non_expansive_zeta_is_rejected() {
    let o = expsub(&["zeta", "times2times3", "--n", "1,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not expansive"));
}

#[test]
fn ledrappier_portrait() {
    let v = json(&expsub(&["portrait", "ledrappier", "--samples", "72"]));
    let hs = v["hyperplanes"].as_array().unwrap();
    assert_eq!(hs.len(), 3);
    assert!(hs.iter().all(|h| h["label"] == "noetherian"));
    assert_eq!(v["samples"].as_array().unwrap().len(), 72);

    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let o = expsub(&["portrait", "ledrappier", "--samples", "72", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = std::fs::read_to_string(svg).unwrap();
    assert!(s.starts_with("<?xml"));
    assert_eq!(s.matches("data-label=\"noetherian\"").count(), 3);
    assert!(!s.contains("data-label=\"variety\""));
}

#[test]
fn output_is_deterministic() {
    let args = ["analyze", "times2times3"];
    let a = expsub(&args);
    let b = expsub(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["checks"].as_object().unwrap().values().all(|c| c == true), "{}", v["checks"]);
}

#[test]
fn descriptor_errors_name_the_line() {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    write!(f, "label = \"bad\"\nd = 2\n\n[[components]]\nclass = \"s_integer\"\ngenerators = [\"2\", \"0\"]\n").unwrap();
    let path = f.path().to_str().unwrap().to_string();
    let o = expsub(&["periodic", &path, "--range", "0..1,0..1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(&format!("{path}:6:")), "{}", stderr(&o));
}

#[test]
fn resource_and_usage_exit_codes() {
    let o = expsub(&["periodic", "times2times3", "--range", "3000000..3000000,0..0"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let o = Command::new(env!("CARGO_BIN_EXE_expsub"))
        .args(["periodic", "times2times3", "--range", "0..1,0..1"])
        .env("EXPSUB_PRECISION", "20")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));

    let o = expsub(&["periodic", "times2times3", "--range", "0..1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = expsub(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
    let o = expsub(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn omega_table() {
    let o = expsub(&["omega", "times2times3", "--samples", "4"]);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("theta,v1,v2,expansive,f{},f{c0:inf}"));
    // at θ = π/2 the direction is (0, 1): f_∅ = 3
    let row: Vec<&str> = lines.nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "true");
    assert_eq!(row[4], "3.000000000000");
    assert_eq!(s.lines().count(), 5);
}

#[test]
fn fixture_names_and_paths_resolve() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/times2times3");
    let a = expsub(&["periodic", "times2times3", "--range", "0..2,0..2"]);
    let b = expsub(&["periodic", root, "--range", "0..2,0..2"]);
    let c = expsub(&["periodic", &format!("{root}.toml"), "--range", "0..2,0..2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let o = expsub(&["periodic", "no-such-fixture", "--range", "0..1,0..1"]);
    assert_eq!(o.status.code(), Some(1));
}
