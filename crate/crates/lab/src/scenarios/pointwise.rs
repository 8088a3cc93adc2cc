//! Pointwise metric comparisons.

use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;

use minmetric::body::Factor;
use minmetric::linalg::{norm, unit};
use minmetric::sampling::item_rng;
use minmetric::{ball_minimal, halfspace_minimal, ConvexBody, Finsler, MetricEvaluator, MetricTag, PlaneSearch};

use super::{ball_point, direction, gaussian, sci, Check, Outcome, ScenarioError, ScenarioInfo};
use crate::config::ScenarioConfig;
use crate::report::{nums, Cell, Object};

fn search(config: &ScenarioConfig) -> PlaneSearch {
    PlaneSearch {
        circle_samples: config.plane_samples,
        ..PlaneSearch::default()
    }
}

/// Sample in the open unit ball of dimension 3 to 6, with a unit direction.
fn ball_sample(seed: u64, i: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = item_rng(seed, i as u64);
    let d = 3 + i % 4;
    (ball_point(&mut rng, d), direction(&mut rng, d))
}

/// Sample of `{x_1 > 0}` in dimension 3 or 4 with `x_1` spread over three decades.
fn halfspace_sample(seed: u64, i: usize) -> (Vec<f64>, Vec<f64>) {
    let mut rng = item_rng(seed, i as u64);
    let d = 3 + i % 2;
    let mut x: Vec<f64> = gaussian(&mut rng, d).iter().map(|c| 3.0 * c).collect();
    x[0] = 10f64.powf(rng.random_range(-2.0..1.0));
    (x, gaussian(&mut rng, d))
}

fn json_point(kind: &str, x: &[f64], v: &[f64], values: &[(&str, f64)]) -> Object {
    let mut o = Object::new();
    o.insert("record".into(), Value::from(kind));
    o.insert("x".into(), nums(x));
    o.insert("v".into(), nums(v));
    for (k, val) in values {
        o.insert((*k).into(), crate::report::num(*val));
    }
    o
}

pub(super) fn ball_equality(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    let balls: Vec<ConvexBody> = (3..7).map(ConvexBody::unit_ball).collect();
    let rows: Vec<(usize, f64, f64, f64)> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let (x, v) = ball_sample(config.seed, i);
            let h = MetricEvaluator::new(MetricTag::Hilbert, &balls[x.len() - 3]).eval(&x, &v)?;
            let g = ball_minimal(&x, &v)?;
            Ok((i, g, h, (g - h).abs()))
        })
        .collect::<minmetric::Result<_>>()?;
    let mut out = Outcome::new(info, &["dim", "radius", "minimal", "hilbert", "abs_diff"]);
    let (worst, max_diff) = rows.iter().fold((0, 0.0f64), |acc, r| if r.3 > acc.1 { (r.0, r.3) } else { acc });
    for &(i, g, h, e) in rows.iter().take(200) {
        let (x, _) = ball_sample(config.seed, i);
        out.table.push(vec![x.len().into(), norm(&x).into(), g.into(), h.into(), e.into()]);
    }
    let (x, v) = ball_sample(config.seed, worst);
    out.records.push(json_point("worst", &x, &v, &[("abs_diff", max_diff)]));
    out.check(Check::new(
        "max_abs_diff",
        max_diff < 1e-8,
        format!("max |minimal - hilbert| < 1e-8 over {} samples", config.samples),
        sci(max_diff),
    ));
    Ok(out)
}

pub(super) fn halfspace_equality(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    let bodies: Vec<ConvexBody> = (3..5).map(ConvexBody::upper_halfspace).collect();
    let rows: Vec<(f64, f64, f64)> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let (x, v) = halfspace_sample(config.seed, i);
            let h = MetricEvaluator::new(MetricTag::Hilbert, &bodies[x.len() - 3]).eval(&x, &v)?;
            let g = halfspace_minimal(&x, &v)?;
            Ok((g, h, (g - h).abs()))
        })
        .collect::<minmetric::Result<_>>()?;
    let mut out = Outcome::new(info, &["x1", "minimal", "hilbert", "abs_diff"]);
    for (i, r) in rows.iter().enumerate().take(200) {
        let (x, _) = halfspace_sample(config.seed, i);
        out.table.push(vec![x[0].into(), r.0.into(), r.1.into(), r.2.into()]);
    }
    let max_diff = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    out.check(Check::new(
        "max_abs_diff",
        max_diff < 1e-10,
        format!("max |v_1|/(2 x_1) - hilbert| < 1e-10 over {} samples", config.samples),
        sci(max_diff),
    ));
    Ok(out)
}

pub(super) fn product_degeneracy(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    let body = ConvexBody::product(vec![Factor::Line, Factor::Ball { dim: 2, radius: 1.0 }])?;
    let h = MetricEvaluator::new(MetricTag::Hilbert, &body);
    let e1 = unit(3, 0);
    let mut out = Outcome::new(info, &["x1", "x2", "x3", "hilbert_e1", "hilbert_e2"]);
    let p = [0.0, 0.0, 0.0];
    let at_p = h.eval(&p, &e1)?;
    let mut all_zero = true;
    for i in 0..config.samples.min(100) {
        let mut rng = item_rng(config.seed, i as u64);
        let disc = ball_point(&mut rng, 2);
        let x = [10.0 * rng.random::<f64>() - 5.0, disc[0], disc[1]];
        let along = h.eval(&x, &e1)?;
        all_zero &= along == 0.0;
        out.table.push(vec![x[0].into(), x[1].into(), x[2].into(), along.into(), h.eval(&x, &unit(3, 1))?.into()]);
    }
    out.check(Check::new("hilbert_line_direction", at_p == 0.0, "hilbert(0, e1) == 0 exactly", sci(at_p)));
    out.check(Check::new(
        "hilbert_line_direction_sampled",
        all_zero,
        "hilbert(x, e1) == 0 exactly at every sampled x",
        all_zero.to_string(),
    ));
    out.check(Check::new(
        "no_two_flat",
        !body.contains_two_flat(),
        "contains_two_flat == false",
        body.contains_two_flat().to_string(),
    ));
    Ok(out)
}

struct Sandwich {
    lower: f64,
    exact: f64,
    upper: f64,
}

fn sandwich_at(body: &ConvexBody, search: &PlaneSearch, x: &[f64], v: &[f64]) -> minmetric::Result<Sandwich> {
    let ev = |tag| MetricEvaluator::new(tag, body).with_plane_search(search.clone());
    Ok(Sandwich {
        lower: ev(MetricTag::MinimalLower).eval(x, v)?,
        exact: ev(MetricTag::ExactMinimal).eval(x, v)?,
        upper: ev(MetricTag::MinimalUpper).eval(x, v)?,
    })
}

pub(super) fn sandwich(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    const SLACK: f64 = 1e-9;
    let ps = search(config);
    let ball = ConvexBody::unit_ball(3);
    let half = ConvexBody::upper_halfspace(3);
    let mut out = Outcome::new(info, &["body", "index", "lower", "exact", "upper", "upper_rel_err"]);
    let close = config.samples.min(1000);
    for (name, body) in [("ball", &ball), ("halfspace", &half)] {
        let rows: Vec<Sandwich> = (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let (x, v) = if name == "ball" {
                    let mut rng = item_rng(config.seed, i as u64);
                    (ball_point(&mut rng, 3), direction(&mut rng, 3))
                } else {
                    let (mut x, v) = halfspace_sample(config.seed, i);
                    x.truncate(3);
                    (x, v[..3].to_vec())
                };
                sandwich_at(body, &ps, &x, &v)
            })
            .collect::<minmetric::Result<_>>()?;
        let low_bad = rows.iter().filter(|r| r.lower > r.exact + SLACK).count();
        let up_bad = rows.iter().filter(|r| r.exact > r.upper + SLACK).count();
        for (i, r) in rows.iter().enumerate().take(100) {
            out.table.push(vec![
                Cell::from(name),
                i.into(),
                r.lower.into(),
                r.exact.into(),
                r.upper.into(),
                (r.upper / r.exact - 1.0).into(),
            ]);
        }
        out.check(Check::new(
            &format!("{name}_lower_le_exact"),
            low_bad == 0,
            format!("violations of lower <= exact + 1e-9 == 0 over {} samples", config.samples),
            low_bad.to_string(),
        ));
        out.check(Check::new(
            &format!("{name}_exact_le_upper"),
            up_bad == 0,
            format!("violations of exact <= upper + 1e-9 == 0 over {} samples", config.samples),
            up_bad.to_string(),
        ));
        if name == "ball" {
            let worst = rows[..close]
                .iter()
                .map(|r| (r.upper / r.exact - 1.0).abs())
                .fold(0.0, f64::max);
            out.check(Check::new(
                "ball_upper_tight",
                worst < 0.01,
                format!(
                    "max |upper/exact - 1| < 1% over {close} samples, {} plane directions",
                    ps.circle_samples
                ),
                sci(worst),
            ));
        }
    }
    Ok(out)
}

pub(super) fn hilbert_vs_minimal(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    const SLACK: f64 = 1e-9;
    let ps = search(config);
    let mut rng = item_rng(config.seed, u64::MAX);
    let mut bodies = vec![
        ("ellipsoid", ConvexBody::ellipsoid(vec![0.0; 3], vec![1.0, 2.0, 0.5])?),
        ("cylinder", ConvexBody::cylinder(3, 1.0, 2.0)?),
        ("polytope20", ConvexBody::random_tangent_polytope(3, 20, &mut rng)?),
    ];
    if let Some(b) = config.load_body()? {
        bodies.push(("custom", b));
    }
    let mut out = Outcome::new(info, &["body", "index", "hilbert", "minimal_upper", "ratio"]);
    for (name, body) in &bodies {
        let h = MetricEvaluator::new(MetricTag::Hilbert, body);
        let u = MetricEvaluator::new(MetricTag::MinimalUpper, body).with_plane_search(ps.clone());
        let rows: Vec<(f64, f64)> = (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = item_rng(config.seed, i as u64);
                let x = body.sample_interior(&mut rng).ok_or(minmetric::Error::EmptySamples)?;
                let v = direction(&mut rng, body.dim());
                Ok((h.eval(&x, &v)?, u.eval(&x, &v)?))
            })
            .collect::<minmetric::Result<_>>()?;
        let bad = rows.iter().filter(|(a, b)| *a > 2.0 * b + SLACK).count();
        let max_ratio = rows.iter().map(|(a, b)| a / b).fold(0.0, f64::max);
        for (i, (a, b)) in rows.iter().enumerate().take(100) {
            out.table.push(vec![Cell::from(*name), i.into(), (*a).into(), (*b).into(), (a / b).into()]);
        }
        out.check(Check::new(
            &format!("{name}_hilbert_le_2_upper"),
            bad == 0,
            format!("violations of hilbert <= 2 minimal_upper + 1e-9 == 0 over {} samples", config.samples),
            format!("{bad} (max ratio {})", sci(max_ratio)),
        ));
    }
    Ok(out)
}

pub(super) fn collar_estimate(info: &ScenarioInfo, config: &ScenarioConfig) -> Result<Outcome, ScenarioError> {
    let ball = ConvexBody::unit_ball(3);
    let f = MetricEvaluator::new(MetricTag::ModelF, &ball);
    let h = MetricEvaluator::new(MetricTag::Hilbert, &ball);
    let rows: Vec<(f64, f64, f64)> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(config.seed, i as u64);
            let delta = 0.1 * 10f64.powf(-4.0 * rng.random::<f64>());
            let u = direction(&mut rng, 3);
            let x: Vec<f64> = u.iter().map(|c| c * (1.0 - delta)).collect();
            let v = direction(&mut rng, 3);
            let fv = f.eval(&x, &v)?;
            Ok((delta, ball_minimal(&x, &v)? / fv, h.eval(&x, &v)? / fv))
        })
        .collect::<minmetric::Result<_>>()?;
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(r.1), h.max(r.1)));
    let (hlo, hhi) = rows.iter().fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(r.2), h.max(r.2)));
    let mut out = Outcome::new(info, &["delta", "minimal_over_F", "hilbert_over_F"]);
    for r in rows.iter().take(200) {
        out.table.push(vec![r.0.into(), r.1.into(), r.2.into()]);
    }
    out.table.note(format!("hilbert/F range: [{}, {}]", sci(hlo), sci(hhi)));
    out.check(Check::new(
        "ratio_in_band",
        lo >= 0.25 && hi <= 4.0,
        format!("minimal/F in [1/4, 4] for all {} samples with delta < 0.1", config.samples),
        format!("[{}, {}]", sci(lo), sci(hi)),
    ));
    Ok(out)
}
