use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use svmcert_core::{fixtures, SvmModel};
use tempfile::TempDir;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svmcert")).args(args).output().expect("spawn svmcert")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "svmcert {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

/// Drops the fields that depend on wall-clock time.
fn strip_timing(mut v: Value) -> Value {
    if let Some(o) = v.as_object_mut() {
        o.remove("timing");
    }
    if let Some(afi) = v.pointer_mut("/importance/afi").and_then(Value::as_object_mut) {
        afi.remove("elapsed");
    }
    v
}

fn model_arg(kernel: &str) -> String {
    golden(&format!("model_{kernel}.json")).display().to_string()
}

fn data_arg() -> String {
    golden("data.csv").display().to_string()
}

/// Compares a run against its frozen report. Set `SVMCERT_BLESS=1` to rewrite
/// the frozen files.
fn check_golden(name: &str, args: &[&str]) {
    let actual = strip_timing(run_json(args));
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("SVMCERT_BLESS").is_some() {
        fs::write(&path, serde_json::to_string_pretty(&actual).unwrap() + "\n").unwrap();
        return;
    }
    let expected: Value = serde_json::from_str(&fs::read_to_string(&path).expect("frozen report")).unwrap();
    assert_eq!(actual, expected, "report {name} drifted");
}

#[test]
fn verify_linear_noise_cat_matches_frozen_report() {
    let (m, d) = (model_arg("linear"), data_arg());
    check_golden(
        "verify_linear",
        &["verify", "--model", &m, "--data", &d, "--similarity", "noise-cat", "--sensitive", "race,sex"],
    );
}

#[test]
fn verify_poly_interval_matches_frozen_report() {
    let (m, d) = (model_arg("poly"), data_arg());
    check_golden(
        "verify_poly_interval",
        &["verify", "--model", &m, "--data", &d, "--domain", "interval", "--oh", "off"],
    );
}

#[test]
fn bounds_linear_matches_frozen_report() {
    let (m, d) = (model_arg("linear"), data_arg());
    check_golden(
        "bounds_linear",
        &[
            "bounds", "--model", &m, "--data", &d, "--similarity", "noise-cat", "--sensitive", "race,sex",
            "--max-depth", "4", "--timeout", "60",
        ],
    );
}

#[test]
fn bounds_rbf_matches_frozen_report() {
    let (m, d) = (model_arg("rbf"), data_arg());
    check_golden(
        "bounds_rbf",
        &["bounds", "--model", &m, "--data", &d, "--similarity", "cat", "--sensitive", "sex", "--max-depth", "3", "--timeout", "60"],
    );
}

#[test]
fn importance_linear_matches_frozen_report() {
    let (m, d) = (model_arg("linear"), data_arg());
    check_golden(
        "importance_linear",
        &["importance", "--model", &m, "--data", &d, "--pfi", "--n-repeat", "5", "--seed", "7", "--stability", "--epsilon", "0.3"],
    );
}

#[test]
fn eval_poly_matches_frozen_report() {
    let (m, d) = (model_arg("poly"), data_arg());
    check_golden("eval_poly", &["eval", "--model", &m, "--data", &d]);
}

#[test]
fn zero_epsilon_noise_proves_every_row() {
    for kernel in ["linear", "poly", "rbf"] {
        let (m, d) = (model_arg(kernel), data_arg());
        let r = run_json(&["verify", "--model", &m, "--data", &d, "--epsilon", "0"]);
        assert_eq!(r["aggregates"]["lb"], 1.0, "{kernel}");
    }
}

#[test]
fn domain_flags_are_ordered() {
    for kernel in ["linear", "poly", "rbf"] {
        let (m, d) = (model_arg(kernel), data_arg());
        let lb = |domain: &str, oh: &str| {
            let r = run_json(&[
                "verify", "--model", &m, "--data", &d, "--similarity", "noise-cat", "--sensitive", "race,sex", "--domain",
                domain, "--oh", oh,
            ]);
            r["aggregates"]["lb"].as_f64().unwrap()
        };
        let (i, ioh, r, roh) = (lb("interval", "off"), lb("interval", "on"), lb("raf", "off"), lb("raf", "on"));
        assert!(i <= ioh && ioh <= roh && r <= roh, "{kernel}: {i} {ioh} {r} {roh}");
    }
}

#[test]
fn toy_model_importance() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("toy.json");
    fs::write(&path, fixtures::toy_linear().to_json().unwrap()).unwrap();
    let r = run_json(&["importance", "--model", path.to_str().unwrap()]);
    assert_eq!(r["importance"]["afi"]["indices"], serde_json::json!([0.5, 1.0]));
    assert_eq!(r["importance"]["afi"]["names"], serde_json::json!(["x1", "x2"]));
}

#[test]
fn pfi_report_is_reproducible() {
    let (m, d) = (model_arg("rbf"), data_arg());
    let args = ["importance", "--model", &m, "--data", &d, "--pfi", "--seed", "11"];
    let a = serde_json::to_vec(&strip_timing(run_json(&args))).unwrap();
    let b = serde_json::to_vec(&strip_timing(run_json(&args))).unwrap();
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_json_and_prints_table() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("report.json");
    let (m, d) = (model_arg("linear"), data_arg());
    let out = run(&["eval", "--model", &m, "--data", &d, "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("accuracy"));
    let report: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["command"], "eval");
    assert_eq!(report["model_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let mut bad_model: Value = serde_json::from_str(&fs::read_to_string(golden("model_linear.json")).unwrap()).unwrap();
    bad_model["kernel"]["kind"] = "sigmoid".into();
    let bad_model_path = dir.path().join("bad.json");
    fs::write(&bad_model_path, bad_model.to_string()).unwrap();

    let csv = fs::read_to_string(golden("data.csv")).unwrap();
    let mut lines: Vec<&str> = csv.lines().collect();
    lines.truncate(3);
    lines.push("0.1,0.2,0.3,0.4,0.5,0.6,0.7,1,1,0,0,1,1");
    let bad_data_path = dir.path().join("bad.csv");
    fs::write(&bad_data_path, lines.join("\n") + "\n").unwrap();

    let (m, d) = (model_arg("linear"), data_arg());
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify", "--model", bad_model_path.to_str().unwrap(), "--data", &d],
        vec!["verify", "--model", &m, "--data", bad_data_path.to_str().unwrap()],
        vec!["importance", "--model", &m, "--pfi"],
        vec!["verify", "--model", &m, "--data", &d, "--similarity", "cat"],
        vec!["verify", "--model", &m, "--data", &d, "--sensitive", "religion", "--similarity", "cat"],
        vec!["verify", "--model", &m, "--data", &d, "--epsilon", "-1"],
        vec!["verify", "--model", &m, "--data", &d, "--domain", "zonotope"],
        vec!["verify", "--model", "/nonexistent/model.json", "--data", &d],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn golden_models_round_trip() {
    for kernel in ["linear", "poly", "rbf"] {
        let m = SvmModel::load(golden(&format!("model_{kernel}.json"))).unwrap();
        let back = SvmModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(m, back);
    }
}
