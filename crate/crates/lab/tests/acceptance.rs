//! Runs every acceptance criterion at its stated tolerance and time limit,
//! printing one PASS/FAIL line each.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use minmetric_lab::{run, ScenarioConfig};

struct Line {
    index: usize,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn scenario(index: usize, name: &'static str, limit_s: u64) -> Line {
    let config = ScenarioConfig::new(name);
    let start = Instant::now();
    let result = run(&config);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    match result {
        Ok(outcome) => {
            let checks: Vec<String> = outcome
                .checks
                .iter()
                .map(|c| format!("{}={}{}", c.name, c.observed, if c.passed { "" } else { "(FAIL)" }))
                .collect();
            Line {
                index,
                name,
                passed: outcome.passed() && elapsed < limit,
                detail: format!(
                    "{:.2} s of {limit_s} s; {}",
                    elapsed.as_secs_f64(),
                    checks.join("; ")
                ),
            }
        }
        Err(e) => Line {
            index,
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn determinism() -> Line {
    let names = [
        "ball-metric-equality",
        "halfspace-equality",
        "product-degeneracy",
        "collar-estimate",
        "delta-contrast",
        "fat-triangles-flat-face",
    ];
    let start = Instant::now();
    let mut mismatched = Vec::new();
    for name in names {
        let config = ScenarioConfig::new(name);
        let a = run(&config).map(|o| o.csv(&config));
        let b = run(&config).map(|o| o.csv(&config));
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => mismatched.push(name),
        }
    }
    // The binary, twice, into separate directories.
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_minmetric"))
            .args(["scenario", "delta-contrast", "--seed", "7", "--out"])
            .arg(d.path())
            .output()
            .expect("binary runs");
        if !status.status.success() {
            mismatched.push("cli-run");
        }
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("delta-contrast.csv")).ok();
    if read(&dirs[0]).is_none() || read(&dirs[0]) != read(&dirs[1]) {
        mismatched.push("cli-delta-contrast");
    }
    let elapsed = start.elapsed();
    Line {
        index: 11,
        name: "determinism",
        passed: mismatched.is_empty() && elapsed < Duration::from_secs(5),
        detail: format!(
            "{:.2} s of 5 s; {} scenarios and one CLI run repeated; mismatches: {:?}",
            elapsed.as_secs_f64(),
            names.len(),
            mismatched
        ),
    }
}

fn main() -> ExitCode {
    let plan: [(&'static str, u64); 10] = [
        ("ball-metric-equality", 5),
        ("halfspace-equality", 5),
        ("sandwich-bounds", 60),
        ("hilbert-vs-minimal", 60),
        ("collar-estimate", 10),
        ("graph-fidelity", 120),
        ("filling-vs-graph", 120),
        ("delta-contrast", 300),
        ("fat-triangles-flat-face", 120),
        ("quasi-geodesic-certification", 30),
    ];
    let mut lines = Vec::new();
    for (i, (name, limit)) in plan.into_iter().enumerate() {
        let line = scenario(i + 1, name, limit);
        print_line(&line);
        lines.push(line);
    }
    let line = determinism();
    print_line(&line);
    lines.push(line);
    // Also exercised, though not a numbered criterion.
    let extra = scenario(0, "product-degeneracy", 5);
    print_line(&extra);
    lines.push(extra);

    let failed = lines.iter().filter(|l| !l.passed).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn print_line(l: &Line) {
    let label = if l.index == 0 { "extra".to_string() } else { format!("criterion {:>2}", l.index) };
    println!(
        "{} {label} {}: {}",
        if l.passed { "PASS" } else { "FAIL" },
        l.name,
        l.detail
    );
}
