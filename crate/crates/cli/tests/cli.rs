mod common;

use std::fs;

use common::{read_dir_bytes, run_in};
use serde_json::Value;

fn json(path: &std::path::Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn solve_writes_trace_result_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--m",
            "100",
            "--n",
            "500",
            "--dict",
            "gaussian",
            "--lambda-ratio",
            "0.5",
            "--region",
            "holder_dome",
            "--gap-tol",
            "1e-9",
            "--seed",
            "7",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("iteration,gap,alive,screened,flops"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(!rows.is_empty());
    for row in &rows {
        let alive: usize = row[2].parse().unwrap();
        let screened: usize = row[3].parse().unwrap();
        assert_eq!(alive + screened, 500);
    }

    let result = json(&dir.path().join("result.json"));
    assert_eq!(result["termination_reason"], "gap_tolerance");
    assert!(result["final_gap"].as_f64().unwrap() <= 1e-9);
    assert_eq!(
        result["iterations"].as_u64().unwrap() as usize,
        rows.len() - 1
    );
    assert_eq!(
        result["screened_counts_per_iteration"]
            .as_array()
            .unwrap()
            .len(),
        rows.len()
    );
    assert!(!result["x_nonzeros"].as_array().unwrap().is_empty());

    let manifest = json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["command"], "solve");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["config"]["region"], "holder_dome");
    assert_eq!(manifest["timestamp"], "2023-11-14T22:13:20Z");
    assert!(manifest["outputs"]["trace.csv"].is_string());
}

#[test]
fn missing_lambda_ratio_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["solve", "--m", "10", "--n", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda-ratio"));
}

#[test]
fn bad_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["solve", "--lambda-ratio", "0.5", "--region", "cube"][..],
        &["solve", "--lambda-ratio", "-1"],
        &["solve", "--lambda-ratio", "0.5", "--screen-every", "0"],
        &["--threads", "0", "solve", "--lambda-ratio", "0.5"],
        &["radius-ratio", "--trials", "0"],
        &["benchmark", "--target-rho", "1.5"],
        &["frobnicate"],
    ] {
        let out = run_in(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn lambda_above_lambda_max_screens_everything() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--m",
            "40",
            "--n",
            "80",
            "--lambda-ratio",
            "1.5",
            "--seed",
            "3",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let result = json(&dir.path().join("result.json"));
    assert!(result["x_nonzeros"].as_array().unwrap().is_empty());
    assert_eq!(result["final_gap"], 0.0);
    assert_eq!(result["iterations"], 0);
    assert_eq!(
        result["screened_counts_per_iteration"],
        serde_json::json!([80])
    );
    assert_eq!(result["termination_reason"], "all_screened");
}

#[test]
fn solve_reads_a_problem_file() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("toy.txt");
    fs::write(&problem, "# identity dictionary\n2 2\n1 0\n0 1\n1 0.2\n").unwrap();
    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            problem.to_str().unwrap(),
            "--lambda-ratio",
            "0.5",
            "--gap-tol",
            "1e-12",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let result = json(&dir.path().join("result.json"));
    assert_eq!(result["lambda"], 0.5);
    let nz = result["x_nonzeros"].as_array().unwrap();
    assert_eq!(nz.len(), 1);
    assert_eq!(nz[0][0], 0);
    assert!((nz[0][1].as_f64().unwrap() - 0.5).abs() <= 1e-6);

    fs::write(&problem, "2 2\n1 0\n0 1\n").unwrap();
    let out = run_in(
        dir.path(),
        &[
            "solve",
            "--problem",
            problem.to_str().unwrap(),
            "--lambda-ratio",
            "0.5",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("observation"));
}

#[test]
fn key_value_config_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("solve.cfg");
    fs::write(
        &cfg,
        "m = 30\nn = 60\nlambda-ratio = 0.7\nregion = gap_sphere\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run_in(
        &out_dir,
        &["--config", cfg.to_str().unwrap(), "solve", "--n", "50"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let manifest = json(&out_dir.join("manifest.json"));
    assert_eq!(manifest["config"]["m"], 30);
    assert_eq!(manifest["config"]["n"], 50);
    assert_eq!(manifest["config"]["lambda_ratio"], 0.7);
    assert_eq!(manifest["config"]["region"], "gap_sphere");
}

#[test]
fn manifest_replay_reproduces_digests() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let out = run_in(
        &first,
        &[
            "solve",
            "--m",
            "50",
            "--n",
            "120",
            "--lambda-ratio",
            "0.4",
            "--seed",
            "11",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let second = dir.path().join("second");
    let manifest = first.join("manifest.json");
    let out = run_in(&second, &["--config", manifest.to_str().unwrap(), "solve"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_dir_bytes(&first), read_dir_bytes(&second));

    let out = run_in(
        &second,
        &["--config", manifest.to_str().unwrap(), "benchmark"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn radius_ratio_default_grid_has_full_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["radius-ratio", "--trials", "1", "--m", "40", "--n", "120"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("radius_ratio.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("dict,lambda_ratio,gap_checkpoint,mean_ratio,trials_counted")
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 2 * 3 * 8);
    for row in &rows {
        if !row[3].is_empty() {
            assert!(row[3].parse::<f64>().unwrap() <= 1.0);
        }
    }
}

#[test]
fn benchmark_reports_three_profiles_on_a_shared_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "benchmark",
            "--m",
            "30",
            "--n",
            "60",
            "--dict",
            "gaussian",
            "--lambda-ratios",
            "0.5",
            "--trials",
            "10",
            "--flop-budget",
            "2000000",
            "--profile-taus",
            "1e-8,1e-4,1",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("profiles.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3 * 3);
    for region in ["gap_sphere", "gap_dome", "holder_dome"] {
        assert_eq!(rows.iter().filter(|r| r.contains(region)).count(), 3);
    }
    let budget = json(&dir.path().join("budget.json"));
    assert_eq!(budget["setups"][0]["budget"], 2_000_000);
    assert_eq!(budget["setups"][0]["calibrated"], false);
}

#[test]
fn unreachable_calibration_target_fails_with_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "benchmark",
            "--m",
            "20",
            "--n",
            "40",
            "--dict",
            "gaussian",
            "--lambda-ratios",
            "0.5",
            "--trials",
            "4",
            "--target-tau",
            "1e-30",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bracket"));
}
