//! Gromov products, four-point hyperbolicity estimates, quasi-geodesic rays
//! and slimness of quasi-geodesic triangles.

use rayon::prelude::*;

use crate::body::{golden_min, ConvexBody};
use crate::distance::{minimal_distance_lower, segment_length, Polyline};
use crate::error::{Error, Result};
use crate::linalg::{check_dim, dist, norm, sub};
use crate::metric::{MetricEvaluator, MetricTag};

/// Slack allowed on the triangle inequality before it is reported.
pub const TRIANGLE_TOL: f64 = 1e-6;

/// `(x|y)_o = (d(x,o) + d(y,o) - d(x,y)) / 2`, clipped at zero within tolerance.
pub fn gromov_product(d_xo: f64, d_yo: f64, d_xy: f64) -> Result<f64> {
    let excess = [
        d_xy - d_xo - d_yo,
        d_xo - d_xy - d_yo,
        d_yo - d_xy - d_xo,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    if excess > TRIANGLE_TOL {
        return Err(Error::TriangleInequality { excess });
    }
    Ok((0.5 * (d_xo + d_yo - d_xy)).max(0.0))
}

/// Pair order used for the six distances of a quadruple.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Four points and their six pairwise distances (in [`PAIRS`] order).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrupleSample {
    pub points: [Vec<f64>; 4],
    pub distances: [f64; 6],
    /// Width of each distance interval (zero for exact distances).
    pub widths: [f64; 6],
}

impl QuadrupleSample {
    pub fn from_distances(points: [Vec<f64>; 4], distances: [f64; 6]) -> Self {
        Self {
            points,
            distances,
            widths: [0.0; 6],
        }
    }

    /// Evaluates the six distances with `d`; `d` returns `(value, width)`.
    pub fn measure(points: [Vec<f64>; 4], mut d: impl FnMut(&[f64], &[f64]) -> Result<(f64, f64)>) -> Result<Self> {
        let mut distances = [0.0; 6];
        let mut widths = [0.0; 6];
        for (k, (i, j)) in PAIRS.iter().enumerate() {
            let (v, w) = d(&points[*i], &points[*j])?;
            distances[k] = v;
            widths[k] = w;
        }
        Ok(Self {
            points,
            distances,
            widths,
        })
    }

    /// `(largest - middle) / 2` over the three pair-sum pairings.
    pub fn defect(&self) -> f64 {
        four_point_defect(&self.distances)
    }
}

/// Four-point defect of six distances in [`PAIRS`] order.
pub fn four_point_defect(d: &[f64; 6]) -> f64 {
    let mut sums = [d[0] + d[5], d[1] + d[4], d[2] + d[3]];
    sums.sort_by(f64::total_cmp);
    0.5 * (sums[2] - sums[1])
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicityReport {
    pub delta_estimate: f64,
    pub worst_quadruple: QuadrupleSample,
    pub worst_index: usize,
    pub sample_count: usize,
    pub distance_method: String,
    /// Largest distance-interval width among the samples.
    pub uncertainty: f64,
}

/// Maximum four-point defect over the samples, with its first witness.
pub fn four_point_delta(samples: &[QuadrupleSample], method: &str) -> Result<HyperbolicityReport> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let (worst_index, delta) = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| (i, s.defect()))
        .reduce(
            || (usize::MAX, f64::NEG_INFINITY),
            |a, b| match a.1.total_cmp(&b.1) {
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Equal => {
                    if a.0 <= b.0 {
                        a
                    } else {
                        b
                    }
                }
            },
        );
    let uncertainty = samples
        .iter()
        .flat_map(|s| s.widths)
        .fold(0.0, f64::max);
    Ok(HyperbolicityReport {
        delta_estimate: delta,
        worst_quadruple: samples[worst_index].clone(),
        worst_index,
        sample_count: samples.len(),
        distance_method: method.to_string(),
        uncertainty,
    })
}

/// Sampled ray `sigma(t) = xi + e^{-2t} (p - xi)` with quasi-geodesic constants.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiGeodesic {
    pub polyline: Polyline,
    /// Multiplicative constant `A = 2 / epsilon`.
    pub a: f64,
    /// Additive constant `B`.
    pub b: f64,
    pub horizon: f64,
    /// Aperture actually used (possibly smaller than requested).
    pub epsilon: f64,
    pub origin: Vec<f64>,
    pub target: Vec<f64>,
}

impl QuasiGeodesic {
    pub fn point(&self, t: f64) -> Vec<f64> {
        ray_point(&self.origin, &self.target, t)
    }
}

fn ray_point(p: &[f64], xi: &[f64], t: f64) -> Vec<f64> {
    let s = (-2.0 * t).exp();
    xi.iter().zip(p).map(|(x, q)| s * q + (1.0 - s) * x).collect()
}

/// Aperture of `p` towards `xi`: best planar clearance in direction `xi - p`
/// divided by `|xi - p|`, as found by the plane search of `metric`.
pub fn aperture(metric: &MetricEvaluator<'_>, p: &[f64], xi: &[f64]) -> Result<f64> {
    let v = sub(xi, p);
    Ok(metric.best_planar_clearance(p, &v)? / norm(&v))
}

/// Builds the ray from interior `p` towards boundary point `xi` sampled at
/// `n` uniform parameters on `[0, horizon]`.
pub fn build_quasi_geodesic(
    body: &ConvexBody,
    p: &[f64],
    xi: &[f64],
    epsilon: f64,
    horizon: f64,
    n: usize,
) -> Result<QuasiGeodesic> {
    check_dim(body.dim(), p)?;
    body.require_boundary(xi)?;
    if !body.is_interior(p) {
        return Err(Error::NotInterior);
    }
    if n < 2 || !(horizon > 0.0) {
        return Err(Error::InvalidPolyline("need n >= 2 samples and a positive horizon".into()));
    }
    let upper = MetricEvaluator::new(MetricTag::MinimalUpper, body);
    let found = aperture(&upper, p, xi)?;
    let eps = epsilon.min(found);
    if !(eps > 0.0) {
        return Err(Error::ApertureFails {
            clearance: found * dist(xi, p),
        });
    }
    let params: Vec<f64> = (0..n).map(|k| horizon * k as f64 / (n - 1) as f64).collect();
    let points = params.iter().map(|&t| ray_point(p, xi, t)).collect();
    Ok(QuasiGeodesic {
        polyline: Polyline::new(points, params)?,
        a: 2.0 / eps,
        b: 0.0,
        horizon,
        epsilon: eps,
        origin: p.to_vec(),
        target: xi.to_vec(),
    })
}

/// Outcome of checking the two-sided quasi-geodesic bounds on sample pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub pairs: usize,
    /// Pairs with `lower < |t - s| - tol`.
    pub lower_violations: usize,
    /// Pairs with `upper > A |t - s| + B + tol`.
    pub upper_violations: usize,
    /// `min (lower - |t - s|)` over pairs.
    pub lower_margin: f64,
    /// `min (A |t - s| + B - upper)` over pairs.
    pub upper_margin: f64,
}

impl Certification {
    pub fn passed(&self) -> bool {
        self.lower_violations == 0 && self.upper_violations == 0
    }
}

/// Checks every sample pair `(s, t)`: the endpoint lower bound must reach
/// `|t - s|` and the length under the planar upper metric must stay below
/// `A |t - s| + B`.
pub fn certify_quasi_geodesic(body: &ConvexBody, q: &QuasiGeodesic, tol: f64) -> Result<Certification> {
    let upper = MetricEvaluator::new(MetricTag::MinimalUpper, body);
    let pts = q.polyline.points();
    let ts = q.polyline.params();
    q.polyline.check_inside(body)?;
    let pieces: Vec<f64> = pts
        .par_windows(2)
        .map(|w| segment_length(&upper, &w[0], &w[1]))
        .collect::<Result<_>>()?;
    let mut prefix = vec![0.0; pts.len()];
    for i in 1..pts.len() {
        prefix[i] = prefix[i - 1] + pieces[i - 1];
    }
    let mut report = Certification {
        pairs: 0,
        lower_violations: 0,
        upper_violations: 0,
        lower_margin: f64::INFINITY,
        upper_margin: f64::INFINITY,
    };
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let gap = ts[j] - ts[i];
            let lower = minimal_distance_lower(body, &pts[i], &pts[j])?;
            let up = prefix[j] - prefix[i];
            let lm = lower - gap;
            let um = q.a * gap + q.b - up;
            report.pairs += 1;
            report.lower_margin = report.lower_margin.min(lm);
            report.upper_margin = report.upper_margin.min(um);
            if lm < -tol {
                report.lower_violations += 1;
            }
            if um < -tol {
                report.upper_violations += 1;
            }
        }
    }
    Ok(report)
}

/// Sampling density for [`triangle_slimness`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlimnessGrid {
    /// Points sampled on the side being tested.
    pub outer: usize,
    /// Points sampled on the other sides before local refinement.
    pub inner: usize,
}

impl Default for SlimnessGrid {
    fn default() -> Self {
        Self { outer: 48, inner: 96 }
    }
}

fn min_to_side(
    p: &[f64],
    side: &Polyline,
    inner: usize,
    d: &(impl Fn(&[f64], &[f64]) -> f64 + Sync),
) -> f64 {
    let t0 = side.params()[0];
    let t1 = side.params()[side.len() - 1];
    let n = inner.max(2);
    let step = (t1 - t0) / (n - 1) as f64;
    let vals: Vec<f64> = (0..n).map(|k| d(p, &side.point_at(t0 + step * k as f64))).collect();
    // Also sample the polyline vertices themselves.
    let vertex_min = side.points().iter().map(|q| d(p, q)).fold(f64::INFINITY, f64::min);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut best = vals[order[0]].min(vertex_min);
    for &k in order.iter().take(3) {
        let c = t0 + step * k as f64;
        let (_, v) = golden_min(
            |t| d(p, &side.point_at(t.clamp(t0, t1))),
            (c - step).max(t0),
            (c + step).min(t1),
        );
        best = best.min(v);
    }
    best
}

/// Lower estimate of the slimness constant of a triangle: the largest
/// distance from a sampled point of one side to the other two sides.
/// `d` should be a lower bound for the distance, making the estimate a
/// witness of fatness.
pub fn triangle_slimness(
    sides: [&Polyline; 3],
    d: impl Fn(&[f64], &[f64]) -> f64 + Sync,
    grid: SlimnessGrid,
) -> Result<f64> {
    let tol = 1e-9;
    for k in 0..3 {
        let gap = dist(sides[k].last(), sides[(k + 1) % 3].first());
        let scale = 1.0 + norm(sides[k].last());
        if gap > tol * scale {
            return Err(Error::EndpointMismatch { gap });
        }
    }
    let mut tasks = Vec::new();
    for k in 0..3 {
        let side = sides[k];
        let t0 = side.params()[0];
        let t1 = side.params()[side.len() - 1];
        let n = grid.outer.max(2);
        for j in 0..n {
            tasks.push((k, side.point_at(t0 + (t1 - t0) * j as f64 / (n - 1) as f64)));
        }
    }
    let m = tasks
        .par_iter()
        .map(|(k, p)| {
            let a = min_to_side(p, sides[(k + 1) % 3], grid.inner, &d);
            let b = min_to_side(p, sides[(k + 2) % 3], grid.inner, &d);
            a.min(b)
        })
        .reduce(|| 0.0, f64::max);
    Ok(m)
}
