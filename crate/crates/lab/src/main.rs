use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use minmetric::distance::{hilbert_distance, minimal_distance_lower, GraphConfig, SampleGraph};
use minmetric::gromov::{four_point_delta, QuadrupleSample};
use minmetric::sampling::item_rng;
use minmetric::{ConvexBody, Finsler, MetricEvaluator, MetricTag};
use minmetric_lab::report::{json_line, num, nums, Object};
use minmetric_lab::{catalog, load_body, ConfigError, ScenarioConfig};

#[derive(Parser)]
#[command(name = "minmetric", version, about = "Minimal and Hilbert metrics on convex bodies")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "MINMETRIC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Finsler metric at a point and vector.
    EvalMetric {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value = "minimal_upper")]
        evaluator: MetricTag,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        x: Point,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        v: Point,
        /// Collar width for the model metric.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Distance between two interior points.
    Distance {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_enum, default_value = "graph")]
        method: Method,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        x: Point,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
        y: Point,
        /// Metric integrated along graph edges.
        #[arg(long, default_value = "minimal_upper")]
        evaluator: MetricTag,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Four-point hyperbolicity estimate from random interior quadruples.
    Delta {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Distance used for the quadruples.
        #[arg(long, value_enum, default_value = "hilbert")]
        method: Method,
        /// Graph budget when `--method graph`.
        #[arg(long, default_value_t = 5000)]
        budget: usize,
    },
    /// Run a named scenario and write its reports.
    Scenario {
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        /// Extra body spec, for scenarios that accept one.
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        graph_nodes: Option<usize>,
        #[arg(long)]
        quadruples: Option<usize>,
        #[arg(long)]
        mesh_level: Option<usize>,
        #[arg(long)]
        plane_samples: Option<usize>,
    },
    /// Print the scenario catalog.
    ListScenarios,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Sampling roadmap under `--evaluator` (minimal_upper for `delta`).
    Graph,
    /// Closed-form Hilbert distance.
    Hilbert,
    /// Certified lower bound of the minimal distance.
    Lower,
}

/// Coordinates given as one argument, separated by commas or spaces.
#[derive(Clone, Debug)]
struct Point(Vec<f64>);

fn parse_point(s: &str) -> Result<Point, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| if v.is_empty() { Err("no coordinates".into()) } else { Ok(Point(v)) })
}

/// Input problems: bad body specs, unknown names, zero budgets.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn body_from(path: &Path) -> Result<ConvexBody> {
    load_body(path).map_err(|e| InputError(e.into()).into())
}

fn print(obj: &Object) {
    println!("{}", json_line(obj));
}

fn eval_metric(body: &Path, tag: MetricTag, x: &[f64], v: &[f64], epsilon: Option<f64>) -> Result<()> {
    let body = body_from(body)?;
    let mut ev = MetricEvaluator::new(tag, &body);
    if let Some(e) = epsilon {
        ev = ev.with_collar(e);
    }
    let value = ev.eval(x, v)?;
    let mut o = Object::new();
    o.insert("evaluator".into(), Value::from(tag.as_str()));
    o.insert("body".into(), Value::from(body.kind().as_str()));
    o.insert("x".into(), nums(x));
    o.insert("v".into(), nums(v));
    o.insert("value".into(), num(value));
    print(&o);
    Ok(())
}

fn distance(
    body: &Path,
    method: Method,
    x: &[f64],
    y: &[f64],
    tag: MetricTag,
    budget: usize,
    seed: u64,
) -> Result<()> {
    let body = body_from(body)?;
    let mut o = Object::new();
    match method {
        Method::Hilbert => {
            let d = hilbert_distance(&body, x, y)?;
            o.insert("method".into(), Value::from("hilbert"));
            o.insert("value".into(), num(d));
        }
        Method::Lower => {
            let d = minimal_distance_lower(&body, x, y)?;
            o.insert("method".into(), Value::from("minimal_lower"));
            o.insert("value".into(), num(d));
        }
        Method::Graph => {
            if budget == 0 {
                return Err(InputError(ConfigError::ZeroBudget("budget").into()).into());
            }
            let ev = MetricEvaluator::new(tag, &body);
            let config = GraphConfig {
                budget,
                seed,
                ..GraphConfig::default()
            };
            let r = minmetric::distance::geodesic_graph_distance(&ev, x, y, &config)?;
            o.insert("method".into(), Value::from(r.method.clone()));
            o.insert("lower".into(), num(r.lower));
            o.insert("upper".into(), num(r.upper));
            o.insert("graph_upper".into(), num(r.graph_upper));
        }
    }
    o.insert("x".into(), nums(x));
    o.insert("y".into(), nums(y));
    print(&o);
    Ok(())
}

fn delta(body: &Path, samples: usize, seed: u64, method: Method, budget: usize) -> Result<()> {
    if samples == 0 || budget == 0 {
        return Err(InputError(ConfigError::ZeroBudget("samples").into()).into());
    }
    let body = body_from(body)?;
    let mut points = Vec::with_capacity(4 * samples);
    for i in 0..4 * samples {
        let mut rng = item_rng(seed, i as u64);
        points.push(body.sample_interior(&mut rng).context("could not sample the body interior")?);
    }
    let quads = |d: &dyn Fn(usize, usize) -> Result<(f64, f64)>| -> Result<Vec<QuadrupleSample>> {
        (0..samples)
            .map(|q| {
                let idx = [4 * q, 4 * q + 1, 4 * q + 2, 4 * q + 3];
                let mut dist = [0.0; 6];
                let mut widths = [0.0; 6];
                for (k, (a, b)) in minmetric::gromov::PAIRS.iter().enumerate() {
                    (dist[k], widths[k]) = d(idx[*a], idx[*b])?;
                }
                let pts = idx.map(|i| points[i].clone());
                Ok(QuadrupleSample { points: pts, distances: dist, widths })
            })
            .collect()
    };
    let (list, label) = match method {
        Method::Hilbert => (quads(&|a, b| Ok((hilbert_distance(&body, &points[a], &points[b])?, 0.0)))?, "hilbert"),
        Method::Lower => (
            quads(&|a, b| Ok((minimal_distance_lower(&body, &points[a], &points[b])?, 0.0)))?,
            "minimal_lower",
        ),
        Method::Graph => {
            let ev = MetricEvaluator::new(MetricTag::MinimalUpper, &body);
            let config = GraphConfig {
                budget,
                seed,
                ..GraphConfig::default()
            };
            let graph = SampleGraph::build(&ev, &points, &config)?;
            (
                quads(&|a, b| {
                    let r = graph.report(a, b)?;
                    Ok((r.midpoint(), r.width()))
                })?,
                "graph/minimal_upper midpoint",
            )
        }
    };
    let rep = four_point_delta(&list, label)?;
    let mut o = Object::new();
    o.insert("delta_estimate".into(), num(rep.delta_estimate));
    o.insert("n_samples".into(), Value::from(rep.sample_count));
    o.insert("method".into(), Value::from(rep.distance_method.clone()));
    o.insert("seed".into(), Value::from(seed));
    o.insert("uncertainty".into(), num(rep.uncertainty));
    o.insert(
        "witness".into(),
        Value::Array(rep.worst_quadruple.points.iter().map(|p| nums(p)).collect()),
    );
    o.insert("witness_distances".into(), nums(&rep.worst_quadruple.distances));
    print(&o);
    Ok(())
}

/// Returns whether every assertion passed.
fn scenario(config: ScenarioConfig) -> Result<bool> {
    config.validate().map_err(|e| InputError(e.into()))?;
    if let Some(path) = &config.body {
        body_from(path)?;
    }
    let start = Instant::now();
    let outcome = minmetric_lab::run(&config)?;
    let (csv, jsonl) = outcome.write(&config, &config.out)?;
    eprintln!(
        "{}: {} in {:.2} s ({} , {})",
        outcome.scenario,
        if outcome.passed() { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        csv.display(),
        jsonl.display()
    );
    for c in &outcome.checks {
        eprintln!(
            "  {} {}: {} [{}]",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.observed,
            c.threshold
        );
    }
    if !outcome.passed() {
        let failures: Vec<Value> = outcome
            .failures()
            .iter()
            .map(|c| {
                serde_json::json!({"check": c.name, "threshold": c.threshold, "observed": c.observed})
            })
            .collect();
        let mut o = Object::new();
        o.insert("scenario".into(), Value::from(outcome.scenario));
        o.insert("failures".into(), Value::Array(failures));
        print(&o);
    }
    Ok(outcome.passed())
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!(InputError(anyhow::anyhow!("--threads must be positive")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::EvalMetric {
            body,
            evaluator,
            x,
            v,
            epsilon,
        } => eval_metric(&body, evaluator, &x.0, &v.0, epsilon)?,
        Command::Distance {
            body,
            method,
            x,
            y,
            evaluator,
            budget,
            seed,
        } => distance(&body, method, &x.0, &y.0, evaluator, budget, seed)?,
        Command::Delta {
            body,
            samples,
            seed,
            method,
            budget,
        } => delta(&body, samples, seed, method, budget)?,
        Command::Scenario {
            name,
            seed,
            out,
            body,
            samples,
            graph_nodes,
            quadruples,
            mesh_level,
            plane_samples,
        } => {
            let mut c = ScenarioConfig::new(name);
            c.seed = seed;
            c.out = out;
            c.body = body;
            c.samples = samples.unwrap_or(c.samples);
            c.graph_nodes = graph_nodes.unwrap_or(c.graph_nodes);
            c.quadruples = quadruples.unwrap_or(c.quadruples);
            c.mesh_level = mesh_level.unwrap_or(c.mesh_level);
            c.plane_samples = plane_samples.unwrap_or(c.plane_samples);
            return scenario(c);
        }
        Command::ListScenarios => {
            for s in catalog() {
                println!("{}\t{}", s.name, s.claim);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
