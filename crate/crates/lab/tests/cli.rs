use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minmetric"))
        .args(args)
        .env("MINMETRIC_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn body(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "bodies", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_lists_named_scenarios() {
    let o = bin(&["list-scenarios"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["ball-metric-equality", "fat-triangles-flat-face", "filling-vs-graph"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn eval_metric_prints_json() {
    let o = bin(&[
        "eval-metric",
        "--body",
        &body("unit_ball.body"),
        "--evaluator",
        "exact_minimal",
        "--x",
        "0.5,0,0",
        "--v",
        "1,0,0",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-15);
}

#[test]
fn distance_methods() {
    let base = ["distance", "--body"];
    let b = body("line_times_disc.body");
    let o = bin(&[base[0], base[1], &b, "--method", "hilbert", "--x", "0,0,0", "--y", "5,0,0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), 0.0);

    let b = body("unit_ball.body");
    let o = bin(&[
        base[0], base[1], &b, "--method", "graph", "--evaluator", "exact_minimal", "--budget", "2000", "--x",
        "-0.5,0,0", "--y", "0.5,0,0",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let exact = 2.0 * 0.5f64.atanh();
    assert!(v["lower"].as_f64().unwrap() <= exact + 1e-12);
    assert!((v["upper"].as_f64().unwrap() / exact - 1.0).abs() < 0.02);
}

#[test]
fn delta_on_the_cube_is_positive() {
    let o = bin(&["delta", "--body", &body("cube.body"), "--samples", "200", "--seed", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["delta_estimate"].as_f64().unwrap() > 0.0);
    assert_eq!(v["n_samples"].as_u64().unwrap(), 200);
}

#[test]
fn input_errors_exit_with_two() {
    let o = bin(&["scenario", "no-such-scenario"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.body");
    std::fs::write(&bad, "kind = ball\ndim = 3\ncolour = red\n").unwrap();
    let o = bin(&["eval-metric", "--body", bad.to_str().unwrap(), "--x", "0,0,0", "--v", "1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = bin(&["scenario", "ball-metric-equality", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_assertions_exit_with_one_and_list_failures() {
    let dir = tempfile::tempdir().unwrap();
    // A single plane direction cannot make the upper bound tight.
    let o = bin(&[
        "scenario",
        "sandwich-bounds",
        "--samples",
        "200",
        "--plane-samples",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let failures = v["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f["check"] == "ball_upper_tight"));
    let csv = std::fs::read_to_string(dir.path().join("sandwich-bounds.csv")).unwrap();
    assert!(csv.contains("check ball_upper_tight: FAIL"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let o = bin(&["scenario", "collar-estimate", "--seed", "9", "--samples", "500", "--out", d.path().to_str().unwrap()]);
        assert!(o.status.success());
    }
    for file in ["collar-estimate.csv", "collar-estimate.jsonl"] {
        let a = std::fs::read(dirs[0].path().join(file)).unwrap();
        let b = std::fs::read(dirs[1].path().join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
    let csv = std::fs::read_to_string(dirs[0].path().join("collar-estimate.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("# check ratio_in_band: PASS (threshold:")));
}
