//! Intrinsic distances: roadmap fidelity and the filling model.

use rand::Rng;
use serde_json::Value;

use minmetric::distance::{filling_distance, klein_distance, BoundaryMesh, GraphConfig, SampleGraph};
use minmetric::linalg::{complement_basis, dot};
use minmetric::sampling::item_rng;
use minmetric::{ConvexBody, MetricEvaluator, MetricTag};

use super::{ball_point, direction, sci, Check, Outcome, ScenarioError, ScenarioInfo};
use crate::config::ScenarioConfig;
use crate::report::{num, nums, Object};

const PAIRS: usize = 50;

/// Pairs of ball points whose Klein distance lies in `[0.5, 4]`.
fn fidelity_pairs(seed: u64) -> Vec<(Vec<f64>, Vec<f64>, f64)> {
    let mut pairs = Vec::with_capacity(PAIRS);
    let mut i = 0u64;
    while pairs.len() < PAIRS {
        let mut rng = item_rng(seed ^ 0x9a1f, i);
        i += 1;
        let x = ball_point(&mut rng, 3);
        let y = ball_point(&mut rng, 3);
        let d = klein_distance(&x, &y).expect("ball points are interior");
        if (0.5..=4.0).contains(&d) {
            pairs.push((x, y, d));
        }
    }
    pairs
}

pub(super) fn graph_fidelity(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    let ball = ConvexBody::unit_ball(3);
    let metric = MetricEvaluator::new(MetricTag::ExactMinimal, &ball);
    let pairs = fidelity_pairs(config.seed);
    let queries: Vec<Vec<f64>> = pairs.iter().flat_map(|(x, y, _)| [x.clone(), y.clone()]).collect();
    let gc = GraphConfig {
        budget: config.graph_nodes,
        seed: config.seed,
        ..GraphConfig::default()
    };
    let graph = SampleGraph::build(&metric, &queries, &gc)?;
    let mut out = Outcome::new(info, &["pair", "oracle", "lower", "upper", "graph_upper", "rel_err"]);
    out.table.note(format!(
        "graph: {} nodes, {} edges, {} shell levels",
        graph.node_count(),
        graph.edge_count(),
        graph.shell_levels()
    ));
    let mut worst: f64 = 0.0;
    let mut raw_worst: f64 = 0.0;
    let mut below = 0;
    for (k, (x, y, oracle)) in pairs.iter().enumerate() {
        let r = graph.report(2 * k, 2 * k + 1)?;
        let rel = r.upper / oracle - 1.0;
        worst = worst.max(rel.abs());
        raw_worst = raw_worst.max((r.graph_upper / oracle - 1.0).abs());
        if r.lower > oracle + 1e-9 {
            below += 1;
        }
        out.table.push(vec![k.into(), (*oracle).into(), r.lower.into(), r.upper.into(), r.graph_upper.into(), rel.into()]);
        let mut o = Object::new();
        o.insert("record".into(), Value::from("pair"));
        o.insert("x".into(), nums(x));
        o.insert("y".into(), nums(y));
        o.insert("oracle".into(), num(*oracle));
        o.insert("upper".into(), num(r.upper));
        o.insert("method".into(), Value::from(r.method));
        out.records.push(o);
    }
    out.table.note(format!(
        "max |graph_upper/oracle - 1| before straightening: {}",
        sci(raw_worst)
    ));
    out.check(Check::new(
        "upper_within_2pct",
        worst <= 0.02,
        format!("max |upper/oracle - 1| <= 2% over {PAIRS} pairs, budget {}", config.graph_nodes),
        sci(worst),
    ));
    out.check(Check::new(
        "lower_below_oracle",
        below == 0,
        "pairs with lower > oracle + 1e-9 == 0",
        below.to_string(),
    ));
    Ok(out)
}

/// Depths of the boundary-approaching pairs.
const DEPTHS: [f64; 8] = [0.02, 0.01, 0.005, 0.0025, 0.0012, 0.0006, 0.0004, 0.0003];
const PER_DEPTH: usize = 4;
const ANGLE: f64 = 0.5;

pub(super) fn filling_vs_graph(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    const GAP_CAP: f64 = 3.0;
    const FLOOR: f64 = 6.0;
    let ball = ConvexBody::unit_ball(3);
    let metric = MetricEvaluator::new(MetricTag::ModelF, &ball).with_collar(0.5);
    let mesh = BoundaryMesh::icosphere(&ball, config.mesh_level)?;
    let mut queries = Vec::new();
    for (level, &delta) in DEPTHS.iter().enumerate() {
        for j in 0..PER_DEPTH {
            let mut rng = item_rng(config.seed ^ 0xf111, (level * PER_DEPTH + j) as u64);
            let u = direction(&mut rng, 3);
            let basis = complement_basis(&u);
            let phi = rng.random::<f64>() * std::f64::consts::TAU;
            let w: Vec<f64> = basis[0]
                .iter()
                .zip(&basis[1])
                .map(|(a, b)| phi.cos() * a + phi.sin() * b)
                .collect();
            let r = 1.0 - delta;
            let x: Vec<f64> = u.iter().map(|c| r * c).collect();
            let y: Vec<f64> = u
                .iter()
                .zip(&w)
                .map(|(a, b)| r * (ANGLE.cos() * a + ANGLE.sin() * b))
                .collect();
            debug_assert!((dot(&x, &y) / (r * r) - ANGLE.cos()).abs() < 1e-12);
            queries.push(x);
            queries.push(y);
        }
    }
    let gc = GraphConfig {
        budget: config.graph_nodes,
        seed: config.seed,
        ..GraphConfig::default()
    };
    let graph = SampleGraph::build(&metric, &queries, &gc)?;
    let mut out = Outcome::new(info, &["delta", "pair", "d_F_upper", "d_H", "gap", "in_window"]);
    out.table.note(format!(
        "graph: {} nodes, {} shell levels; mesh: {} vertices",
        graph.node_count(),
        graph.shell_levels(),
        mesh.vertices().len()
    ));
    let mut max_gap: f64 = 0.0;
    let mut windowed = 0;
    let mut deepest_min = f64::INFINITY;
    for (level, &delta) in DEPTHS.iter().enumerate() {
        for j in 0..PER_DEPTH {
            let q = level * PER_DEPTH + j;
            let (x, y) = (&queries[2 * q], &queries[2 * q + 1]);
            let df = graph.report(2 * q, 2 * q + 1)?.upper;
            let dh = filling_distance(&ball, &mesh, x, y)?;
            let gap = (df - dh).abs();
            let inside = (2.0..=8.0).contains(&df);
            if inside {
                windowed += 1;
                max_gap = max_gap.max(gap);
            }
            if level == DEPTHS.len() - 1 {
                deepest_min = deepest_min.min(df.min(dh));
            }
            out.table.push(vec![delta.into(), j.into(), df.into(), dh.into(), gap.into(), inside.into()]);
        }
    }
    out.check(Check::new(
        "gap_bounded",
        windowed > 0 && max_gap <= GAP_CAP,
        format!("max |d_F_upper - d_H| <= {GAP_CAP} over pairs with d_F_upper in [2, 8]"),
        format!("{} over {windowed} pairs", sci(max_gap)),
    ));
    out.check(Check::new(
        "both_diverge",
        deepest_min > FLOOR,
        format!("min(d_F_upper, d_H) > {FLOOR} at delta = {}", DEPTHS[DEPTHS.len() - 1]),
        sci(deepest_min),
    ));
    Ok(out)
}
