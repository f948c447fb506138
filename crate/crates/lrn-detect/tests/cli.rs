use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lrn-detect"));
    c.env_remove("LRN_DETECT_CACHE");
    c
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn lrn-detect")
}

fn analyze(name: &str) -> (i32, Value) {
    let input = fixture(name);
    let out = run(&["--pipeline", "analyze", "--input", input.to_str().unwrap()]);
    let report = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), report)
}

#[test]
fn analyze_exit_codes_follow_status() {
    for (name, code, status) in [
        ("ghz_0.3.json", 0, "LRN_CERTIFIED"),
        ("four_branch.json", 2, "EXACT_SRN_EXCLUDED"),
        ("four_branch_weights.json", 2, "EXACT_SRN_EXCLUDED"),
        ("ghz.json", 3, "INCONCLUSIVE"),
        ("product.json", 3, "INCONCLUSIVE"),
        ("chi3_pi3.json", 3, "INCONCLUSIVE"),
    ] {
        let (got, report) = analyze(name);
        assert_eq!(got, code, "{name}");
        assert_eq!(report["status"], status, "{name}");
        assert_eq!(report["exit_code"], code, "{name}");
    }
}

#[test]
fn replay_reproduces_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let input = fixture("four_branch.json");
    let out = run(&["--pipeline", "analyze", "--input", input.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let replayed = run(&["--replay", report.to_str().unwrap()]);
    assert_eq!(replayed.status.code(), Some(2), "{}", String::from_utf8_lossy(&replayed.stderr));
    assert_eq!(replayed.stdout, std::fs::read(&report).unwrap());
}

#[test]
fn tampered_report_fails_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--pipeline", "ghz", "--alpha-sq", "3/10"]);
    assert_eq!(out.status.code(), Some(0));
    let mut report: Value = serde_json::from_slice(&out.stdout).unwrap();
    report["status"] = Value::from("INCONCLUSIVE");
    let path = dir.path().join("tampered.json");
    std::fs::write(&path, serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(run(&["--replay", path.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["--pipeline", "verify", "--suite", "stabilizer", "--suite", "fannes", "--trials", "5", "--seed", "9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn typicality_csv() {
    let out = run(&["--pipeline", "typicality", "--format", "csv", "--n-min", "20", "--n-max", "25"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,log_ratio"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 6);
    assert!(values.windows(2).all(|w| w[1] < w[0] && w[0] < 0.0));
}

#[test]
fn stab_reports_bell_entropy() {
    let input = fixture("bell.tableau");
    let out = run(&["--pipeline", "stab", "--input", input.to_str().unwrap(), "--region", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"entropy\""), "{text}");
}

#[test]
fn dependent_tableau_fails_verification() {
    let input = fixture("dependent.tableau");
    let out = run(&["--pipeline", "verify", "--input", input.to_str().unwrap(), "--suite", "typicality"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stdout).contains("dependent"));
}

#[test]
fn request_errors_exit_one() {
    let product = fixture("product.json");
    for args in [
        vec!["--pipeline", "analyze"],
        vec!["--pipeline", "ghz"],
        vec!["--pipeline", "ghz", "--alpha-sq", "3/2"],
        vec!["--pipeline", "analyze", "--input", "/nonexistent/tensor.json"],
        vec!["--pipeline", "analyze", "--input", product.to_str().unwrap(), "--format", "csv"],
        vec!["--pipeline", "typicality", "--n-min", "30", "--n-max", "20"],
        vec!["--no-such-flag"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("ghz_0.3.json");
    let args = ["--pipeline", "analyze", "--input", input.to_str().unwrap()];
    let cold = bin().env("LRN_DETECT_CACHE", dir.path()).args(args).output().unwrap();
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 1);
    let warm = bin().env("LRN_DETECT_CACHE", dir.path()).args(args).output().unwrap();
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, run(&args).stdout);
}
