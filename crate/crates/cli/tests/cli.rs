use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn phi4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phi4")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

const QUICK: &str = r#"{"epsilon": 0.8, "oversampling": 1.0}"#;

#[test]
fn eigensolve_matches_qes_closed_form() {
    let v = json(&phi4(&["eigensolve", "--kind", "qes", "--g", "0.01", "--b", "1.5", "--states", "2", "--points", "8001"]));
    let e = v["energies"].as_array().unwrap();
    let x = v["exact"].as_array().unwrap();
    for k in 0..2 {
        let (a, b) = (e[k].as_f64().unwrap(), x[k].as_f64().unwrap());
        assert!((a - b).abs() < 1e-4 * b.abs(), "{a} vs {b}");
    }
}

#[test]
fn csv_numbers_carry_seventeen_digits() {
    let out = phi4(&["calibrate", "x", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let tau = text.lines().find(|l| l.starts_with("value,")).unwrap().trim_start_matches("value,");
    let (mantissa, _) = tau.split_once('e').unwrap();
    assert_eq!(mantissa.replace('.', "").len(), 17, "{tau}");
    assert!((tau.parse::<f64>().unwrap() - 93.160157).abs() < 1e-5);
}

#[test]
fn invalid_input_exits_with_three() {
    assert_eq!(phi4(&["passage", "--rabi", "0.1"]).status.code(), Some(3));
    assert_eq!(phi4(&["eigensolve", "--kind", "qes", "--g", "-1", "--b", "1"]).status.code(), Some(3));
    assert_eq!(phi4(&["no-such-command"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"n_qubits": 1, "gates": [{"gate": "xrot", "qubit": 2, "theta": 1.0}]}"#);
    assert_eq!(phi4(&["hadamard", "--circuit", &bad]).status.code(), Some(3));
    let garbled = write(dir.path(), "garbled.json", "{");
    assert_eq!(phi4(&["hadamard", "--circuit", &garbled]).status.code(), Some(3));
    assert_eq!(phi4(&["--help"]).status.code(), Some(0));
}

#[test]
fn promise_violation_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "half.json", r#"{"n_qubits": 1, "gates": [{"gate": "xrot", "qubit": 0, "theta": 1.5707963267948966}]}"#);
    let out = phi4(&["verify", "--circuit", &c, "--ideal"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["decision"]["decision"], "promise_violated");
    let c = write(dir.path(), "id.json", r#"{"n_qubits": 2, "gates": []}"#);
    assert_eq!(phi4(&["verify", "--circuit", &c, "--ideal"]).status.code(), Some(0));
}

#[test]
fn hadamard_is_reproducible_from_seed() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        dir.path(),
        "c.json",
        r#"{"n_qubits": 2, "gates": [{"gate": "xrot", "qubit": 0, "theta": 1.1}, {"gate": "entangling", "qubits": [0, 1], "alpha": 0.4, "beta": 0.9}]}"#,
    );
    let a = phi4(&["hadamard", "--circuit", &c, "--seed", "11", "--shots", "2000"]);
    let b = phi4(&["hadamard", "--circuit", &c, "--seed", "11", "--shots", "2000"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let (est, se, exact) = (
        v["shot"]["estimate"].as_f64().unwrap(),
        v["shot"]["standard_error"].as_f64().unwrap(),
        v["exact"].as_f64().unwrap(),
    );
    assert!((est - exact).abs() <= 4.0 * se, "{est} vs {exact} ± {se}");
    assert_eq!(v["shot"]["seed"], 11);
}

#[test]
fn compiled_fields_verify_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        dir.path(),
        "c.json",
        r#"{"n_qubits": 2, "gates": [{"gate": "xrot", "qubit": 1, "theta": 0.4}, {"gate": "zrot", "qubit": 0, "theta": 0.2}]}"#,
    );
    let cfg = write(dir.path(), "cfg.json", QUICK);
    let out = dir.path().join("run");
    let out_s = out.display().to_string();
    let status = phi4(&["compile", "--circuit", &c, "--config", &cfg, "--out", &out_s]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(out.join("fields.json").exists() && out.join("fields.bin").exists() && out.join("compile.json").exists());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out.join("compile.json")).unwrap()).unwrap();
    let header = report["fields_header"].as_str().unwrap();
    let v = json(&phi4(&["verify", "--fields", header]));
    assert_eq!(v["within_budget"], true);
    let direct = json(&phi4(&["verify", "--circuit", &c, "--config", &cfg]));
    assert_eq!(v["simulation"], direct["simulation"]);
}

#[test]
fn resource_scalings() {
    let v = json(&phi4(&["estimate-resources", "--qubits", "4", "--gates", "10", "--depth", "5"]));
    assert_eq!(v["prep_time_scale"].as_f64().unwrap(), 65536.0);
    assert!((v["lambda"].as_f64().unwrap() - 0.1).abs() < 1e-15);
    assert_eq!(phi4(&["estimate-resources", "--qubits", "0", "--gates", "1", "--depth", "1"]).status.code(), Some(3));
}

#[test]
fn passage_from_epsilon_passes_conditions() {
    let v = json(&phi4(&["passage", "--epsilon", "0.2"]));
    assert_eq!(v["conditions"]["pass"], true);
    assert!(v["result"]["fidelity"].as_f64().unwrap() >= 1.0 - 5.0 * 0.2);
}

#[test]
fn spectrum_stays_under_bound_and_traces_to_disk() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let status = phi4(&["spectrum", "--bandwidth", "1", "--duration", "100", "--points", "201", "--out", &out, "--format", "csv"]);
    assert!(status.status.success());
    let text = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(f[3] <= f[4], "{line}");
        rows += 1;
    }
    assert_eq!(rows, 201);
    let status = phi4(&["passage", "--rabi", "0.01", "--bandwidth", "0.1", "--duration", "300", "--trace", "11", "--out", &out]);
    assert!(status.status.success());
    assert_eq!(std::fs::read_to_string(dir.path().join("trace.csv")).unwrap().lines().count(), 12);
}

#[test]
fn entangling_calibration_records_to_disk() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().display().to_string();
    let status = phi4(&["calibrate", "entangling", "--alpha", "0.8", "--beta", "-0.3", "--out", &out]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("calibrate.json")).unwrap()).unwrap();
    assert!(v["detail"]["leakage"].as_f64().unwrap() < 1e-6);
    let recs: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("calibrations.json")).unwrap()).unwrap();
    assert_eq!(recs[0]["gate"], "entangling");
}
