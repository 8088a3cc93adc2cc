//! Sampled curves and their Finsler lengths.

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{lerp, sub};
use crate::metric::Finsler;

/// Order-8 Gauss-Legendre nodes on `[-1, 1]` (positive half) and weights.
#[allow(clippy::excessive_precision)]
const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
#[allow(clippy::excessive_precision)]
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

const REL_TOL: f64 = 1e-6;
const MAX_DEPTH: u32 = 24;

/// Ordered curve samples with strictly increasing parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Vec<f64>>,
    params: Vec<f64>,
}

impl Polyline {
    pub fn new(points: Vec<Vec<f64>>, params: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPolyline("needs at least two points".into()));
        }
        if points.len() != params.len() {
            return Err(Error::InvalidPolyline(format!(
                "{} points but {} parameters",
                points.len(),
                params.len()
            )));
        }
        if params.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPolyline("parameters must increase strictly".into()));
        }
        let d = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
        Ok(Self { points, params })
    }

    /// Parameters `0, 1, 2, ...`.
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let params = (0..points.len()).map(|i| i as f64).collect();
        Self::new(points, params)
    }

    pub fn segment(a: &[f64], b: &[f64]) -> Self {
        Self {
            points: vec![a.to_vec(), b.to_vec()],
            params: vec![0.0, 1.0],
        }
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> &[f64] {
        &self.points[0]
    }

    pub fn last(&self) -> &[f64] {
        &self.points[self.points.len() - 1]
    }

    /// Same trace traversed backwards, parameters mirrored.
    pub fn reversed(&self) -> Self {
        let t1 = self.params[self.params.len() - 1];
        let t0 = self.params[0];
        Self {
            points: self.points.iter().rev().cloned().collect(),
            params: self.params.iter().rev().map(|t| t0 + t1 - t).collect(),
        }
    }

    /// Piecewise-linear interpolation, clamped to the parameter range.
    pub fn point_at(&self, t: f64) -> Vec<f64> {
        let n = self.params.len();
        if t <= self.params[0] {
            return self.points[0].clone();
        }
        if t >= self.params[n - 1] {
            return self.points[n - 1].clone();
        }
        let k = self.params.partition_point(|p| *p <= t) - 1;
        let s = (t - self.params[k]) / (self.params[k + 1] - self.params[k]);
        lerp(&self.points[k], &self.points[k + 1], s).to_vec()
    }

    /// Fails unless every sample is interior (then every segment is, by convexity).
    pub fn check_inside(&self, body: &ConvexBody) -> Result<()> {
        if self.points.iter().all(|p| body.is_interior(p)) {
            Ok(())
        } else {
            Err(Error::SegmentExits)
        }
    }
}

fn gauss8<F: Finsler + ?Sized>(f: &F, a: &[f64], dir: &[f64], lo: f64, hi: f64) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut sum = 0.0;
    for (x, w) in GL_NODES.iter().zip(&GL_WEIGHTS) {
        for s in [mid - half * x, mid + half * x] {
            let p = crate::linalg::axpy(a, s, dir);
            sum += w * f.eval(&p, dir)?;
        }
    }
    Ok(half * sum)
}

fn adaptive<F: Finsler + ?Sized>(
    f: &F,
    a: &[f64],
    dir: &[f64],
    lo: f64,
    hi: f64,
    whole: f64,
    depth: u32,
) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let left = gauss8(f, a, dir, lo, mid)?;
    let right = gauss8(f, a, dir, mid, hi)?;
    let halves = left + right;
    if depth >= MAX_DEPTH || (halves - whole).abs() <= REL_TOL * halves.abs() {
        return Ok(halves);
    }
    Ok(adaptive(f, a, dir, lo, mid, left, depth + 1)? + adaptive(f, a, dir, mid, hi, right, depth + 1)?)
}

/// Length of the straight segment `a -> b` under `f`, for interior endpoints.
pub fn segment_length<F: Finsler + ?Sized>(f: &F, a: &[f64], b: &[f64]) -> Result<f64> {
    let dir = sub(b, a);
    if dir.iter().all(|c| *c == 0.0) {
        return Ok(0.0);
    }
    let whole = gauss8(f, a, &dir, 0.0, 1.0)?;
    adaptive(f, a, &dir, 0.0, 1.0, whole, 0)
}

/// Length of a polyline under `f`. The body is used to check that the
/// curve stays inside.
pub fn curve_length<F: Finsler + ?Sized>(f: &F, body: &ConvexBody, curve: &Polyline) -> Result<f64> {
    curve.check_inside(body)?;
    curve
        .points
        .windows(2)
        .map(|w| segment_length(f, &w[0], &w[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{MetricEvaluator, MetricTag};

    #[test]
    fn radial_halfspace_segment_has_unit_length() {
        let h = ConvexBody::upper_halfspace(3);
        let f = MetricEvaluator::new(MetricTag::ExactMinimal, &h);
        let e2 = std::f64::consts::E.powi(2);
        let l = curve_length(&f, &h, &Polyline::segment(&[1.0, 0.3, 0.0], &[e2, 0.3, 0.0])).unwrap();
        assert!((l - 1.0).abs() < 1e-9, "{l}");
    }

    #[test]
    fn equal_points_have_zero_length() {
        let b = ConvexBody::unit_ball(3);
        let f = MetricEvaluator::new(MetricTag::Hilbert, &b);
        let p = vec![0.1, 0.2, 0.3];
        assert_eq!(curve_length(&f, &b, &Polyline::segment(&p, &p)).unwrap(), 0.0);
    }

    #[test]
    fn exits_are_rejected() {
        let b = ConvexBody::unit_ball(3);
        let f = MetricEvaluator::new(MetricTag::Hilbert, &b);
        let c = Polyline::segment(&[0.0; 3], &[2.0, 0.0, 0.0]);
        assert_eq!(curve_length(&f, &b, &c), Err(Error::SegmentExits));
    }

    #[test]
    fn polyline_validation_and_interpolation() {
        assert!(Polyline::new(vec![vec![0.0; 3]], vec![0.0]).is_err());
        assert!(Polyline::new(vec![vec![0.0; 3], vec![1.0; 3]], vec![1.0, 1.0]).is_err());
        let p = Polyline::new(vec![vec![0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]], vec![0.0, 2.0]).unwrap();
        assert_eq!(p.point_at(0.5), vec![0.5, 0.0, 0.0]);
        assert_eq!(p.reversed().first(), &[2.0, 0.0, 0.0]);
    }
}
