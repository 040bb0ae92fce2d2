use std::path::Path;
use std::process::{Command, Output};

fn tristeer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tristeer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_state(dir: &Path, name: &str, diag: f64) -> String {
    let matrix: Vec<Vec<[f64; 2]>> = (0..8)
        .map(|r| (0..8).map(|c| [if r == c { diag } else { 0.0 }, 0.0]).collect())
        .collect();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::json!({ "dim": 8, "matrix": matrix }).to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn tables_csv_rows() {
    let o = tristeer(&["tables", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "family,a-to-bc:steering,a-to-bc:genuine,ab-to-c:steering");
    let row = |line: &str| -> (String, Vec<f64>) {
        let mut f = line.split(',');
        let fam = f.next().unwrap().to_owned();
        (fam, f.map(|x| x.parse().unwrap()).collect())
    };
    let (fam, ghz) = row(lines[1]);
    assert_eq!(fam, "ghz");
    for (v, e) in ghz.iter().zip([0.406, 0.672, 0.600]) {
        assert!((v - e).abs() <= 1e-3 + 1e-12, "{v} vs {e}");
    }
    let (fam, w) = row(lines[2]);
    assert_eq!(fam, "w");
    for (v, (e, tol)) in w.iter().zip([(0.310, 5e-3), (0.816, 1e-3), (0.621, 5e-3)]) {
        assert!((v - e).abs() <= tol + 1e-12, "{v} vs {e}");
    }
}

#[test]
fn analyze_balanced_ghz_detects_genuine_steering() {
    let o = tristeer(&[
        "analyze", "--builtin", "ghz", "--a", "0.70710678", "--noise", "0", "--scenario", "a-to-bc:genuine",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict:  detected"));
}

#[test]
fn analyze_json_follows_report_schema() {
    let o = tristeer(&[
        "analyze", "--builtin", "w", "--noise", "0.1", "--scenario", "ab-to-c:steering", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["scenario"].is_string());
    assert!(v["mu"].is_f64());
    assert!(v["certified"].is_boolean());
    assert!(v["notes"].is_array());
    for c in v["criteria"].as_array().unwrap() {
        assert!(c["id"].is_string() && c["detail"].is_string() && c["detected"].is_boolean());
        for k in ["lhs", "rhs", "margin"] {
            assert!(c[k].is_number(), "{k}");
        }
    }
    for (_, c) in v["conclusions"].as_object().unwrap() {
        assert!(c == "detected" || c == "undetermined");
    }
    assert_eq!(v["conclusions"]["ab-to-c:steering"], "detected");
}

#[test]
fn heavy_noise_is_undetermined() {
    let o = tristeer(&["analyze", "--builtin", "ghz", "--noise", "0.9", "--scenario", "a-to-bc:steering"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict:  undetermined"));
}

#[test]
fn uncertified_mu_claims_nothing() {
    let o = tristeer(&[
        "analyze", "--builtin", "ghz", "--scenario", "a-to-bc:genuine", "--mu", "0.9", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certified"], false);
    assert!(v["conclusions"].as_object().unwrap().values().all(|c| c == "undetermined"));
}

#[test]
fn validate_reports_trace() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_state(dir.path(), "bad.json", 0.2);
    let o = tristeer(&["validate", "--state", &bad]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("trace"));
    let good = write_state(dir.path(), "good.json", 0.125);
    let o = tristeer(&["validate", "--state", &good]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn analyze_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let mixed = write_state(dir.path(), "mixed.json", 0.125);
    let o = tristeer(&["analyze", "--state", &mixed, "--scenario", "a-to-bc:steering", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("scenario,mu,certified,criterion,"));
    assert!(out.lines().skip(1).all(|l| l.ends_with(",false,undetermined")));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["analyze", "--scenario", "a-to-bc:genuine"][..],
        &["analyze", "--builtin", "ghz", "--scenario", "sideways"],
        &["analyze", "--builtin", "w", "--a", "0.5", "--scenario", "a-to-bc:genuine"],
        &["analyze", "--builtin", "ghz", "--scenario", "a-to-bc:genuine", "--criterion", "PPT_ENT"],
        &["threshold", "--builtin", "ghz", "--scenario", "a-to-bc:steering", "--criterion", "GHZ_ENT", "--tol", "1e-9"],
        &["bogus"],
    ] {
        let o = tristeer(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn threshold_failures_exit_4() {
    let o = tristeer(&["threshold", "--builtin", "w", "--scenario", "a-to-bc:steering", "--criterion", "GHZ_ENT"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("never fires"));
}

#[test]
fn threshold_csv_columns() {
    let o = tristeer(&[
        "threshold", "--builtin", "ghz", "--scenario", "a-to-bc:genuine", "--criterion", "GHZ_GME", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "family,scenario,criterion,p_critical,tolerance");
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&fields[..3], ["ghz", "a-to-bc:genuine", "GHZ_GME"]);
    let p: f64 = fields[3].parse().unwrap();
    assert!((p - 0.672).abs() <= 1e-3);
    assert_eq!(fields[4].parse::<f64>().unwrap(), 1e-6);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["tables", "--format", "json"][..],
        &["analyze", "--builtin", "w", "--noise", "0.2", "--scenario", "a-to-bc:genuine", "--format", "json"],
        &["threshold", "--builtin", "w", "--scenario", "ab-to-c:steering", "--criterion", "all"],
    ] {
        let a = tristeer(args);
        let b = tristeer(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
