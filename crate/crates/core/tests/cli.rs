use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn scm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scm")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = scm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn simulate_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "sim.json", r#"{"schedule": {"rho": 0.3, "segments": [{"k": 10, "h": 1, "eps": 0.2}]}, "n": 30, "b": 4}"#);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let text = ok(&["simulate", "--config", &cfg, "--seed", "5", "--out", a.to_str().unwrap()]);
    assert!(text.starts_with("seed 5"));
    ok(&["simulate", "--config", &cfg, "--seed", "5", "--out", b.to_str().unwrap()]);
    let pa = fs::read(a.join("panel.csv")).unwrap();
    assert_eq!(pa, fs::read(b.join("panel.csv")).unwrap());
    assert_eq!(String::from_utf8(pa).unwrap().lines().count(), 1 + 4 * 30);
    assert_eq!(manifest(&a)["seed"], 5);
    assert_eq!(manifest(&a)["command"], "simulate");

    let single = tmp.path().join("single");
    ok(&["simulate", "--out", single.to_str().unwrap()]);
    let path = fs::read_to_string(single.join("path.csv")).unwrap();
    assert!(path.starts_with("t,y\n1,"));
    assert_eq!(path.lines().count(), 1001);
}

#[test]
fn spectrum_of_null_has_no_outliers() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "s.json", r#"{"schedule": {"rho": 0.3}, "n": 400, "bins": 10}"#);
    let out = tmp.path().join("s");
    let text = ok(&["spectrum", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(text.contains("0 eigenvalue(s) below, 0 above"), "{text}");
    assert_eq!(fs::read_to_string(out.join("eigenvalues.csv")).unwrap().lines().count(), 401);
    assert_eq!(fs::read_to_string(out.join("histogram.csv")).unwrap().lines().count(), 11);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(summary["n"], 400);
    assert!(out.join("manifest.json").exists());
}

#[test]
fn spectrum_hetero_forms_mirror() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "h.json",
        r#"{"schedule": {"rho": 0.3}, "n": 400, "hetero": {"segments": [{"k": 200, "h": 1, "xi": -0.3}]}}"#,
    );
    let d = tmp.path().join("d");
    let e = tmp.path().join("e");
    let display = ok(&["spectrum", "--config", &cfg, "--out", d.to_str().unwrap()]);
    let exact = ok(&["spectrum", "--config", &cfg, "--hetero-form", "exact", "--out", e.to_str().unwrap()]);
    assert!(display.contains("1 eigenvalue(s) below, 0 above"), "{display}");
    assert!(exact.contains("0 eigenvalue(s) below, 1 above"), "{exact}");
}

#[test]
fn outliers_cross_check() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let text = ok(&["outliers", "--out", out.to_str().unwrap()]);
    assert!(text.contains("method: closed_form"));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("outliers.json")).unwrap()).unwrap();
    assert!(doc["cross_checks"][0]["max_abs_diff"].as_f64().unwrap() < 1e-10);
    let left = doc["report"]["left"][0].as_f64().unwrap();
    assert!((left - 0.45255).abs() < 1e-5);

    let none = write_config(tmp.path(), "none.json", r#"{"schedule": {"rho": 0.3, "segments": [{"k": 5, "h": 1, "eps": -0.2}]}}"#);
    let text = ok(&["outliers", "--config", &none, "--out", tmp.path().join("n").to_str().unwrap()]);
    assert!(text.starts_with("no outliers"));
}

#[test]
fn estimate_from_simulation_and_file() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "e.json", r#"{"schedule": {"rho": 0.3, "segments": [{"k": 15, "h": 1, "eps": 0.3}]}, "n": 30, "b": 200}"#);
    let out = tmp.path().join("e");
    let text = ok(&["estimate", "--config", &cfg, "--seed", "3", "--out", out.to_str().unwrap()]);
    assert!(text.contains("MAE"));
    let first = fs::read(out.join("estimate.json")).unwrap();
    ok(&["estimate", "--config", &cfg, "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(first, fs::read(out.join("estimate.json")).unwrap());

    let sim = tmp.path().join("sim");
    let simcfg = write_config(tmp.path(), "p.json", r#"{"schedule": {"rho": 0.3}, "n": 20, "b": 100}"#);
    ok(&["simulate", "--config", &simcfg, "--out", sim.to_str().unwrap()]);
    let panel = sim.join("panel.csv");
    let text = ok(&["estimate", "--panel", panel.to_str().unwrap(), "--mode", "threshold", "--out", tmp.path().join("f").to_str().unwrap()]);
    assert!(text.contains("n = 20, B = 100"));
    assert!(!text.contains("MAE"));
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let bad = write_config(tmp.path(), "bad.json", r#"{"schedule": {"rho": 1.5}}"#);
    let out = scm(&["outliers", "--config", &bad, "--out", tmp.path().join("x").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let missing = scm(&["outliers", "--config", tmp.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(4));
    let garbled = write_config(tmp.path(), "g.json", "{ not json");
    assert_eq!(scm(&["spectrum", "--config", &garbled]).status.code(), Some(2));
    // clap reports usage errors with its own code
    assert_eq!(scm(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn table1_checkpoints_resume() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "t.json",
        r#"{"rho_list": [0.3], "eps_ratio_list": [1.0], "b_list": [50, 400], "n": 20, "k": 10, "replications": 3}"#,
    );
    let out = tmp.path().join("t");
    let o = out.to_str().unwrap();
    let text = ok(&["table1", "--config", &cfg, "--out", o]);
    assert!(text.contains("mean MAE non-increasing in B"));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert_eq!(fs::read_to_string(out.join("batch.csv")).unwrap().lines().count(), 1 + 6);

    // a rerun reads checkpoints: doctor one and see it in the summary
    let ck = out.join("cells").join("rho0.3_ratio1_B50.csv");
    let text_ck = fs::read_to_string(&ck).unwrap();
    let mut lines: Vec<String> = text_ck.lines().map(String::from).collect();
    for l in lines.iter_mut().skip(1) {
        let mut f: Vec<String> = l.split(',').map(String::from).collect();
        f[4] = "7".into();
        *l = f.join(",");
    }
    fs::write(&ck, lines.join("\n") + "\n").unwrap();
    ok(&["table1", "--config", &cfg, "--out", o]);
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.lines().nth(1).unwrap().contains(",7.0,"), "{summary}");

    // a different replication count recomputes
    ok(&["table1", "--config", &cfg, "--reps", "2", "--out", o]);
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(!summary.lines().nth(1).unwrap().contains(",7.0,"));
    assert_eq!(manifest(&out)["params"]["replications"], 2);
}
