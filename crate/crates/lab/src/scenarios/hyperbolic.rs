//! Four-point defects, slim triangles and quasi-geodesic rays.

use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;

use minmetric::distance::{hilbert_distance, klein_distance, minimal_distance_lower, Polyline};
use minmetric::gromov::{
    build_quasi_geodesic, certify_quasi_geodesic, four_point_delta, four_point_defect, triangle_slimness,
    QuadrupleSample, SlimnessGrid, PAIRS,
};
use minmetric::linalg::dist;
use minmetric::sampling::item_rng;
use minmetric::ConvexBody;

use super::{ball_point, direction, sci, Check, Outcome, ScenarioError, ScenarioInfo};
use crate::config::ScenarioConfig;
use crate::report::{num, nums, Object};

/// Deepest boundary level `2^{-k}` of the biased stratum.
const MAX_LEVEL: i32 = 20;

/// Quadruple `i` of the nested Klein-ball sequence.
fn klein_quadruple(seed: u64, i: usize) -> [Vec<f64>; 4] {
    let mut rng = item_rng(seed, i as u64);
    let mut point = |_| {
        if i.is_multiple_of(2) {
            ball_point(&mut rng, 3)
        } else {
            let k = rng.random_range(1..=MAX_LEVEL);
            let r = 1.0 - 0.5f64.powi(k);
            direction(&mut rng, 3).iter().map(|c| r * c).collect()
        }
    };
    [point(0), point(1), point(2), point(3)]
}

fn klein_sample(points: [Vec<f64>; 4]) -> minmetric::Result<QuadrupleSample> {
    QuadrupleSample::measure(points, |x, y| Ok((klein_distance(x, y)?, 0.0)))
}

/// The corner simplex `{x_i > 0, sum x_i < 1}` of `R^3`.
fn corner_simplex() -> minmetric::Result<ConvexBody> {
    ConvexBody::polytope(
        &[
            (vec![-1.0, 0.0, 0.0], 0.0),
            (vec![0.0, -1.0, 0.0], 0.0),
            (vec![0.0, 0.0, -1.0], 0.0),
            (vec![1.0, 1.0, 1.0], 1.0),
        ],
        vec![0.25; 3],
    )
}

/// Point of the simplex with log-barycentric coordinates `u`.
fn from_log(u: &[f64]) -> Vec<f64> {
    let w = [1.0, u[0].exp(), u[1].exp(), u[2].exp()];
    let total: f64 = w.iter().sum();
    w[1..].iter().map(|x| x / total).collect()
}

/// Square `c, c + a, c + a + b, c + b` in log-barycentric coordinates.
fn flat_square(c: &[f64], s: f64) -> [Vec<f64>; 4] {
    let at = |da: f64, db: f64| from_log(&[c[0] + da, c[1] - db, c[2]]);
    [at(0.0, 0.0), at(s, 0.0), at(s, s), at(0.0, s)]
}

fn quad_record(kind: &str, q: &QuadrupleSample) -> Object {
    let mut o = Object::new();
    o.insert("record".into(), Value::from(kind));
    o.insert(
        "points".into(),
        Value::Array(q.points.iter().map(|p| nums(p)).collect()),
    );
    o.insert("distances".into(), nums(&q.distances));
    o.insert("defect".into(), num(q.defect()));
    o
}

pub(super) fn delta_contrast(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    let mut out = Outcome::new(info, &["geometry", "scale_or_samples", "delta_estimate", "ratio"]);

    let n = config.quadruples;
    let samples: Vec<QuadrupleSample> = (0..n)
        .into_par_iter()
        .map(|i| klein_sample(klein_quadruple(config.seed, i)))
        .collect::<minmetric::Result<_>>()?;
    let mut sizes: Vec<usize> = [1000, 10_000, 100_000].into_iter().filter(|&m| m < n).collect();
    sizes.push(n);
    let mut deltas = Vec::new();
    for &m in &sizes {
        let rep = four_point_delta(&samples[..m], "klein")?;
        deltas.push(rep.delta_estimate);
        out.table.push(vec!["klein-ball".into(), m.into(), rep.delta_estimate.into(), (rep.delta_estimate / deltas[0]).into()]);
        if m == n {
            out.records.push(quad_record("klein_witness", &rep.worst_quadruple));
        }
    }
    let growth = deltas[deltas.len() - 1] / deltas[0] - 1.0;
    out.check(Check::new(
        "klein_bounded",
        growth < 0.10,
        format!("delta({}) / delta({}) - 1 < 10%", sizes[sizes.len() - 1], sizes[0]),
        sci(growth),
    ));

    let corners = [vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
    let mut d = [0.0; 6];
    for (k, (i, j)) in PAIRS.iter().enumerate() {
        d[k] = dist(&corners[*i], &corners[*j]);
    }
    let unit = four_point_defect(&d);
    let exact = 2f64.sqrt() - 1.0;
    out.table.push(vec!["euclidean-square".into(), 1.0.into(), unit.into(), (unit / exact).into()]);
    out.check(Check::new(
        "euclidean_anchor",
        (unit - exact).abs() < 1e-12,
        "unit-square defect == sqrt(2) - 1 within 1e-12",
        sci(unit),
    ));

    let simplex = corner_simplex()?;
    let mut flat = Vec::new();
    for s in [1.0, 2.0, 4.0] {
        let squares: Vec<QuadrupleSample> = (0..16)
            .map(|j| {
                let mut rng = item_rng(config.seed ^ 0x5a, j);
                let c: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
                QuadrupleSample::measure(flat_square(&c, s), |x, y| Ok((hilbert_distance(&simplex, x, y)?, 0.0)))
            })
            .collect::<minmetric::Result<_>>()?;
        let rep = four_point_delta(&squares, "hilbert/simplex")?;
        let ratio = flat.last().map_or(f64::NAN, |p| rep.delta_estimate / p);
        flat.push(rep.delta_estimate);
        out.table.push(vec!["simplex-square".into(), s.into(), rep.delta_estimate.into(), ratio.into()]);
    }
    let ratios = [flat[1] / flat[0], flat[2] / flat[1]];
    out.check(Check::new(
        "flat_linear",
        ratios.iter().all(|r| (r / 2.0 - 1.0).abs() <= 0.05),
        "delta(2s) / delta(s) in 2.0 +- 5% for s in {1, 2}",
        format!("{} {}", sci(ratios[0]), sci(ratios[1])),
    ));
    Ok(out)
}

pub(super) fn fat_triangles(info: &ScenarioInfo, _config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    let body = ConvexBody::cylinder(3, 1.0, 1.0)?;
    let p = [0.0, 0.0, 0.5];
    let xi = [0.0, 0.0, 0.0];
    let eta = [1.0, 0.0, 0.0];
    let d = |x: &[f64], y: &[f64]| minimal_distance_lower(&body, x, y).unwrap_or(0.0);
    let mut out = Outcome::new(info, &["horizon", "epsilon_xi", "epsilon_eta", "m_lower"]);
    let mut m = Vec::new();
    for t in [2.0, 3.0, 4.0] {
        let n = 1 + 64 * t as usize;
        let gamma = build_quasi_geodesic(&body, &p, &xi, 1.0, t, n)?;
        let sigma = build_quasi_geodesic(&body, &p, &eta, 1.0, t, n)?;
        let g = &gamma.polyline;
        let s = sigma.polyline.reversed();
        let bridge = Polyline::segment(g.last(), s.first());
        let value = triangle_slimness([g, &bridge, &s], d, SlimnessGrid::default())?;
        m.push(value);
        out.table.push(vec![t.into(), gamma.epsilon.into(), sigma.epsilon.into(), value.into()]);
    }
    out.check(Check::new(
        "strictly_increasing",
        m[0] < m[1] && m[1] < m[2],
        "M_lower(2) < M_lower(3) < M_lower(4)",
        format!("{} {} {}", sci(m[0]), sci(m[1]), sci(m[2])),
    ));
    out.check(Check::new(
        "grows_by_half",
        m[2] >= m[0] + 0.5,
        "M_lower(4) >= M_lower(2) + 0.5",
        sci(m[2] - m[0]),
    ));
    Ok(out)
}

pub(super) fn quasi_geodesics(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    const TOL: f64 = 1e-6;
    const HORIZON: f64 = 3.0;
    const N: usize = 31;
    let ball = ConvexBody::unit_ball(3);
    let cylinder = ConvexBody::cylinder(3, 1.0, 1.0)?;
    let mut cases: Vec<(&str, &ConvexBody, Vec<f64>, Vec<f64>)> = vec![
        ("ball", &ball, vec![0.0; 3], vec![1.0, 0.0, 0.0]),
        ("cylinder", &cylinder, vec![0.0, 0.0, 0.5], vec![0.0, 0.0, 0.0]),
        ("cylinder", &cylinder, vec![0.0, 0.0, 0.5], vec![1.0, 0.0, 0.0]),
        ("cylinder", &cylinder, vec![0.0, 0.0, 0.5], vec![0.0, 1.0, 0.5]),
    ];
    for j in 0..2 {
        let mut rng = item_rng(config.seed ^ 0x96, j);
        let p: Vec<f64> = ball_point(&mut rng, 3).iter().map(|c| 0.5 * c).collect();
        cases.push(("ball", &ball, p, direction(&mut rng, 3)));
    }
    let mut out = Outcome::new(
        info,
        &["body", "case", "epsilon", "pairs", "lower_violations", "upper_violations", "lower_margin", "upper_margin"],
    );
    let mut total = (0, 0);
    for (k, (name, body, p, xi)) in cases.iter().enumerate() {
        let q = build_quasi_geodesic(body, p, xi, 1.0, HORIZON, N)?;
        let c = certify_quasi_geodesic(body, &q, TOL)?;
        total.0 += c.lower_violations;
        total.1 += c.upper_violations;
        out.table.push(vec![
            (*name).into(),
            k.into(),
            q.epsilon.into(),
            c.pairs.into(),
            c.lower_violations.into(),
            c.upper_violations.into(),
            c.lower_margin.into(),
            c.upper_margin.into(),
        ]);
    }
    out.check(Check::new(
        "lower_bound",
        total.0 == 0,
        format!("pairs with lower < |t - s| - {TOL:e} == 0"),
        total.0.to_string(),
    ));
    out.check(Check::new(
        "upper_bound",
        total.1 == 0,
        format!("pairs with upper > (2/eps) |t - s| + {TOL:e} == 0"),
        total.1.to_string(),
    ));
    Ok(out)
}
