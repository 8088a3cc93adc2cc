//! Static registry of reproduction scenarios.

mod distances;
mod hyperbolic;
mod pointwise;

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::Value;

use crate::config::{ConfigError, ScenarioConfig};
use crate::report::{json_line, Object, Table};

/// Result of one assertion.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Human-readable threshold, e.g. `max_abs_diff < 1e-8`.
    pub threshold: String,
    pub observed: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, threshold: impl Into<String>, observed: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            threshold: threshold.into(),
            observed: observed.into(),
        }
    }
}

/// Everything a scenario produces.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub scenario: &'static str,
    pub claim: &'static str,
    pub checks: Vec<Check>,
    pub table: Table,
    /// Extra JSON records (witnesses, summaries).
    pub records: Vec<Object>,
}

impl Outcome {
    fn new(info: &ScenarioInfo, columns: &[&str]) -> Self {
        Self {
            scenario: info.name,
            claim: info.claim,
            checks: Vec::new(),
            table: Table::new(columns),
            records: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// CSV text: header with claim, configuration, thresholds and verdicts.
    pub fn csv(&self, config: &ScenarioConfig) -> String {
        let mut t = self.table.clone();
        let mut head = vec![
            format!("scenario: {}", self.scenario),
            format!("claim: {}", self.claim),
            format!(
                "config: seed={} samples={} graph_nodes={} quadruples={} mesh_level={} plane_samples={}",
                config.seed,
                config.samples,
                config.graph_nodes,
                config.quadruples,
                config.mesh_level,
                config.plane_samples
            ),
        ];
        for c in &self.checks {
            head.push(format!(
                "check {}: {} (threshold: {}; observed: {})",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.threshold,
                c.observed
            ));
        }
        head.append(&mut t.header);
        t.header = head;
        t.to_csv()
    }

    /// JSON lines: one summary object, then the extra records.
    pub fn jsonl(&self, config: &ScenarioConfig) -> String {
        let mut summary = Object::new();
        summary.insert("scenario".into(), Value::from(self.scenario));
        summary.insert("seed".into(), Value::from(config.seed));
        summary.insert("passed".into(), Value::from(self.passed()));
        let failures: Vec<Value> = self
            .failures()
            .iter()
            .map(|c| {
                let mut o = serde_json::Map::new();
                o.insert("check".into(), Value::from(c.name.clone()));
                o.insert("threshold".into(), Value::from(c.threshold.clone()));
                o.insert("observed".into(), Value::from(c.observed.clone()));
                Value::Object(o)
            })
            .collect();
        summary.insert("failures".into(), Value::Array(failures));
        let mut out = json_line(&summary);
        out.push('\n');
        for r in &self.records {
            out.push_str(&json_line(r));
            out.push('\n');
        }
        out
    }

    /// Writes `<dir>/<scenario>.csv` and `<dir>/<scenario>.jsonl`.
    pub fn write(&self, config: &ScenarioConfig, dir: &Path) -> std::io::Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.scenario));
        let jsonl = dir.join(format!("{}.jsonl", self.scenario));
        std::fs::write(&csv, self.csv(config))?;
        std::fs::write(&jsonl, self.jsonl(config))?;
        Ok((csv, jsonl))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compute(#[from] minmetric::Error),
}

type Runner = fn(&ScenarioInfo, &ScenarioConfig) -> Result<Outcome, ScenarioError>;

pub struct ScenarioInfo {
    pub name: &'static str,
    /// The statement the scenario checks.
    pub claim: &'static str,
    run: Runner,
}

static CATALOG: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "ball-metric-equality",
        claim: "on the unit ball the minimal metric (Beltrami-Cayley form) equals the Hilbert metric",
        run: pointwise::ball_equality,
    },
    ScenarioInfo {
        name: "halfspace-equality",
        claim: "on a half-space the minimal metric |v_n|/(2 dist) equals the Hilbert metric",
        run: pointwise::halfspace_equality,
    },
    ScenarioInfo {
        name: "product-degeneracy",
        claim: "on R x B^2 the Hilbert metric vanishes along the line factor while the body contains no 2-plane",
        run: pointwise::product_degeneracy,
    },
    ScenarioInfo {
        name: "sandwich-bounds",
        claim: "half the Hilbert metric <= minimal metric <= |v| / best planar clearance; the upper bound is tight on the ball",
        run: pointwise::sandwich,
    },
    ScenarioInfo {
        name: "hilbert-vs-minimal",
        claim: "on every convex body the Hilbert metric is at most twice the minimal metric",
        run: pointwise::hilbert_vs_minimal,
    },
    ScenarioInfo {
        name: "collar-estimate",
        claim: "near the boundary of a strongly convex body the minimal and Hilbert metrics are comparable to the collar model metric F",
        run: pointwise::collar_estimate,
    },
    ScenarioInfo {
        name: "graph-fidelity",
        claim: "sampling-roadmap upper bounds reproduce the closed-form distance of the unit ball within 2%",
        run: distances::graph_fidelity,
    },
    ScenarioInfo {
        name: "filling-vs-graph",
        claim: "the model distance d_F and the filling distance d_H differ by a bounded amount while both diverge towards the boundary",
        run: distances::filling_vs_graph,
    },
    ScenarioInfo {
        name: "delta-contrast",
        claim: "four-point defects stay bounded in the hyperbolic ball but grow linearly on flat squares",
        run: hyperbolic::delta_contrast,
    },
    ScenarioInfo {
        name: "fat-triangles-flat-face",
        claim: "a flat boundary face yields quasi-geodesic triangles that are not uniformly slim",
        run: hyperbolic::fat_triangles,
    },
    ScenarioInfo {
        name: "quasi-geodesic-certification",
        claim: "rays xi + e^{-2t}(p - xi) towards the boundary are (2/eps, 0) quasi-geodesics for the minimal distance",
        run: hyperbolic::quasi_geodesics,
    },
];

pub fn catalog() -> &'static [ScenarioInfo] {
    CATALOG
}

pub fn find(name: &str) -> Option<&'static ScenarioInfo> {
    CATALOG.iter().find(|s| s.name == name)
}

/// Runs a validated configuration.
pub fn run(config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    config.validate()?;
    let info = find(&config.name).expect("validated");
    (info.run)(info, config)
}

pub(crate) fn gaussian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point in the open unit ball.
pub(crate) fn ball_point<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    let g = gaussian(rng, d);
    let n = minmetric::linalg::norm(&g);
    let r = rng.random::<f64>().powf(1.0 / d as f64);
    g.iter().map(|x| x * r / n).collect()
}

/// Unit vector in a uniformly random direction.
pub(crate) fn direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    let g = gaussian(rng, d);
    let n = minmetric::linalg::norm(&g);
    g.iter().map(|x| x / n).collect()
}

pub(crate) fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_contains_the_named_scenarios() {
        for name in ["ball-metric-equality", "fat-triangles-flat-face", "filling-vs-graph"] {
            assert!(find(name).is_some(), "{name}");
        }
        assert_eq!(catalog().len(), 11);
    }
}
