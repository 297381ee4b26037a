use std::process::{Command, Output};

use tempfile::TempDir;

fn qpd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpd"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exact_run_prints_json() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "w.json",
        r#"{"protocol": "measurement_qpd", "n": 2, "hidden": "both"}"#,
    );
    let out = qpd(&["run", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["tool"], "qpd");
    assert!((report["summary"]["confidence"].as_f64().unwrap() - 1.0).abs() <= 1e-10);
    assert_eq!(report["hypotheses"].as_array().unwrap().len(), 2);
}

#[test]
fn locc_csv_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "locc.json",
        r#"{"protocol": "locc_fock", "hidden": "J"}"#,
    );
    let out = qpd(&["run", "--config", &cfg, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("hidden,pattern,value"));
    let mut rows: Vec<(String, f64)> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            assert_eq!(cols.len(), 3, "{l}");
            assert_eq!(cols[0], "J");
            (cols[1].to_owned(), cols[2].parse().unwrap())
        })
        .collect();
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    assert_eq!(rows.len(), 6);
    for (i, (pattern, p)) in rows.iter().enumerate() {
        let want = if i < 4 { 0.125 } else { 0.25 };
        assert!((p - want).abs() <= 1e-10, "{pattern}: {p}");
    }
}

#[test]
fn flags_override_config_and_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "s.json",
        r#"{"protocol": "unitary_qpd_entangled", "visibility": 0.9, "seed": 1, "trials": 10}"#,
    );
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = qpd(&[
            "run",
            "--config",
            &cfg,
            "--mode",
            "sample",
            "--trials",
            "4000",
            "--seed",
            "9",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(a, b);
    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["seed"], 9);
    assert_eq!(report["summary"]["trials"], 4000);
}

#[test]
fn list_protocols_has_eight_entries() {
    let out = qpd(&["list-protocols"]);
    assert_eq!(out.status.code(), Some(0));
    let catalog: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = catalog.as_array().unwrap();
    assert_eq!(entries.len(), 8);
    assert!(entries.iter().any(|e| e["name"] == "measurement_qpd"));
}

#[test]
fn plan_named_and_from_file() {
    let out = qpd(&["plan", "--a", "z", "--b", "h"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["plan"]["uses"], 2);

    let dir = TempDir::new().unwrap();
    let x = write_config(&dir, "x.json", "[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]");
    let out = qpd(&["plan", "--a", "z", "--b", &x, "--format", "csv"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).starts_with("term,weight,phase,factors\n"));
}

#[test]
fn config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.json");
    let unknown = write_config(
        &dir,
        "u.json",
        r#"{"protocol": "pauli_entangled", "colour": 3}"#,
    );
    let bad_field = write_config(&dir, "b.json", r#"{"protocol": "measurement_qpd", "n": 1}"#);
    let wrong_hidden = write_config(
        &dir,
        "h.json",
        r#"{"protocol": "locc_fock", "hidden": "S"}"#,
    );
    for args in [
        vec!["run", "--config", missing.to_str().unwrap()],
        vec!["run", "--config", &unknown],
        vec!["run", "--config", &bad_field],
        vec!["run", "--config", &wrong_hidden],
        vec!["run"],
        vec!["frobnicate"],
        vec!["plan", "--a", "z", "--b", "no-such-gate"],
    ] {
        let out = qpd(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn runtime_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "ok.json", r#"{"protocol": "pauli_unentangled"}"#);
    let target = dir.path().join("missing-dir").join("out.json");
    let out = qpd(&["run", "--config", &cfg, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("out.json"), "{err}");
    assert!(!target.exists());

    // identical operands cannot be told apart
    let out = qpd(&["plan", "--a", "h", "--b", "h"]);
    assert_eq!(out.status.code(), Some(3));
}
