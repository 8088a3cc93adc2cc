//! Pointwise Finsler metrics on convex bodies.
//!
//! Every evaluator works in the body's local frame, so values commute with
//! the rigid placement of the body.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::body::{ConvexBody, Shape};
use crate::error::{Error, Result};
use crate::linalg::{check_dim, complement_basis, dot, norm, Buf, Plane2};

/// A Finsler (pseudo)metric `F(x, v)`.
pub trait Finsler: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64], v: &[f64]) -> Result<f64>;
    /// Short provenance label.
    fn label(&self) -> &str;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricTag {
    /// Closed-form minimal metric (ball and half-space).
    ExactMinimal,
    Hilbert,
    /// Boundary-collar model metric.
    ModelF,
    /// Certified lower bound for the minimal metric: half the Hilbert metric.
    MinimalLower,
    /// Certified upper bound for the minimal metric from planar slices.
    MinimalUpper,
}

impl MetricTag {
    pub const ALL: [MetricTag; 5] = [
        MetricTag::ExactMinimal,
        MetricTag::Hilbert,
        MetricTag::ModelF,
        MetricTag::MinimalLower,
        MetricTag::MinimalUpper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricTag::ExactMinimal => "exact_minimal",
            MetricTag::Hilbert => "hilbert",
            MetricTag::ModelF => "model_F",
            MetricTag::MinimalLower => "minimal_lower",
            MetricTag::MinimalUpper => "minimal_upper",
        }
    }
}

impl fmt::Display for MetricTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        MetricTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = MetricTag::ALL.iter().map(|t| t.as_str()).collect();
                format!("unknown evaluator `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Budget of the search over 2-planes containing a direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSearch {
    /// Grid size on the circle of planes in dimension 3.
    pub circle_samples: usize,
    /// Random candidate planes in dimension > 3.
    pub random_samples: usize,
    /// Coordinate-ascent rounds after random sampling.
    pub ascent_rounds: usize,
    pub seed: u64,
}

impl Default for PlaneSearch {
    fn default() -> Self {
        Self {
            circle_samples: 512,
            random_samples: 4096,
            ascent_rounds: 3,
            seed: 0x5eed_0f91_a7e5,
        }
    }
}

/// Minimal metric of the unit ball (Beltrami-Cayley form).
pub fn ball_minimal(x: &[f64], v: &[f64]) -> Result<f64> {
    check_dim(x.len(), v)?;
    let s = -crate::linalg::norm2_minus(x, 1.0);
    if !(s > 0.0) {
        return Err(Error::NotInterior);
    }
    let xv = dot(x, v);
    Ok((s * dot(v, v) + xv * xv).sqrt() / s)
}

/// Minimal metric of the half-space `{x_1 > 0}`.
pub fn halfspace_minimal(x: &[f64], v: &[f64]) -> Result<f64> {
    check_dim(x.len(), v)?;
    if x.is_empty() || !(x[0] > 0.0) {
        return Err(Error::NotInterior);
    }
    Ok(v[0].abs() / (2.0 * x[0]))
}

/// A tagged metric evaluator bound to a body.
#[derive(Debug, Clone)]
pub struct MetricEvaluator<'a> {
    tag: MetricTag,
    body: &'a ConvexBody,
    local: ConvexBody,
    epsilon: f64,
    outside: f64,
    search: PlaneSearch,
}

impl<'a> MetricEvaluator<'a> {
    /// Evaluator with the body's collar width and matching outside constant.
    pub fn new(tag: MetricTag, body: &'a ConvexBody) -> Self {
        let epsilon = body.collar_width();
        Self {
            tag,
            body,
            local: body.local(),
            epsilon,
            outside: 0.5 / epsilon,
            search: PlaneSearch::default(),
        }
    }

    /// Collar width for the model metric; resets the outside constant to `1/(2 eps)`.
    pub fn with_collar(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self.outside = 0.5 / epsilon;
        self
    }

    pub fn with_outside_constant(mut self, c: f64) -> Self {
        self.outside = c;
        self
    }

    pub fn with_plane_search(mut self, search: PlaneSearch) -> Self {
        self.search = search;
        self
    }

    pub fn tag(&self) -> MetricTag {
        self.tag
    }

    pub fn body(&self) -> &ConvexBody {
        self.body
    }

    pub fn collar(&self) -> f64 {
        self.epsilon
    }

    pub fn outside_constant(&self) -> f64 {
        self.outside
    }

    pub fn plane_search(&self) -> &PlaneSearch {
        &self.search
    }

    /// True if path lengths under this evaluator bound the minimal distance from above.
    pub fn is_minimal_upper_bound(&self) -> bool {
        matches!(self.tag, MetricTag::ExactMinimal | MetricTag::MinimalUpper)
    }

    fn local_args(&self, x: &[f64], v: &[f64]) -> Result<(Buf, Buf)> {
        check_dim(self.body.dim(), x)?;
        check_dim(self.body.dim(), v)?;
        if !self.body.is_interior(x) {
            return Err(Error::NotInterior);
        }
        Ok((self.body.to_local(x), self.body.dir_to_local(v)))
    }

    fn exact(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        match self.local.shape() {
            Shape::Ball { center, radius } => {
                let y: Buf = x.iter().zip(center).map(|(a, c)| (a - c) / radius).collect();
                let w: Buf = v.iter().map(|a| a / radius).collect();
                ball_minimal(&y, &w)
            }
            Shape::HalfSpace(face) => Ok(dot(&face.normal, v).abs() / (2.0 * face.slack(x))),
            _ => Err(Error::NoClosedForm(self.body.kind().as_str())),
        }
    }

    fn hilbert(&self, x: &[f64], v: &[f64]) -> f64 {
        let (tm, tp) = self.local.chord_unchecked(x, v);
        0.5 * (1.0 / tm + 1.0 / tp)
    }

    fn model(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        let delta = self.local.boundary_distance(x)?;
        if delta > self.epsilon {
            return Ok(self.outside * norm(v));
        }
        let c = self.local.collar_decompose(x, v)?;
        Ok(norm(&c.v_normal) / (2.0 * delta) + norm(&c.v_tangent) / delta.sqrt())
    }

    /// Maximizes `score(plane, best_so_far)` over 2-planes containing the
    /// unit vector `v`. Works in local coordinates.
    fn search_planes(&self, v: &[f64], mut score: impl FnMut(&Plane2, f64) -> f64) -> f64 {
        let basis = complement_basis(v);
        let plane_for = |c: &[f64]| -> Plane2 {
            let mut u: Buf = smallvec::smallvec![0.0; v.len()];
            for (ci, bi) in c.iter().zip(&basis) {
                for (uj, bj) in u.iter_mut().zip(bi) {
                    *uj += ci * bj;
                }
            }
            let n = norm(&u);
            Plane2 {
                a: v.to_vec(),
                b: u.iter().map(|x| x / n).collect(),
            }
        };
        let mut best = f64::NEG_INFINITY;
        if basis.len() == 2 {
            let n = self.search.circle_samples.max(1);
            for k in 0..n {
                let phi = std::f64::consts::PI * k as f64 / n as f64;
                let s = score(&plane_for(&[phi.cos(), phi.sin()]), best);
                if s > best {
                    best = s;
                    if best == f64::INFINITY {
                        break;
                    }
                }
            }
            return best;
        }

        let m = basis.len();
        let mut rng = ChaCha8Rng::seed_from_u64(self.search.seed);
        let mut best_c: Vec<f64> = vec![0.0; m];
        for _ in 0..self.search.random_samples.max(1) {
            let c: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
            let nc = norm(&c);
            if nc == 0.0 {
                continue;
            }
            let s = score(&plane_for(&c), best);
            if s > best {
                best = s;
                best_c = c.iter().map(|x| x / nc).collect();
                if best == f64::INFINITY {
                    return best;
                }
            }
        }
        let mut step = 0.25;
        for _ in 0..self.search.ascent_rounds {
            for i in 0..m {
                for sign in [1.0, -1.0] {
                    let mut c = best_c.clone();
                    c[i] += sign * step;
                    let nc = norm(&c);
                    if nc == 0.0 {
                        continue;
                    }
                    let s = score(&plane_for(&c), best);
                    if s > best {
                        best = s;
                        best_c = c.iter().map(|x| x / nc).collect();
                    }
                }
            }
            step *= 0.5;
        }
        best
    }

    fn upper(&self, x: &[f64], v: &[f64]) -> f64 {
        let vn = norm(v);
        let vu: Buf = v.iter().map(|c| c / vn).collect();
        let local = &self.local;
        // score = 1 / bound, so the best plane maximizes it.
        let best = self.search_planes(&vu, |plane, best| {
            let clearance = local.planar_distance_unchecked(x, plane, best.max(0.0) * vn);
            let mut s = clearance / vn;
            if let Some(disc) = local.slice_disc_bound(x, v, plane) {
                s = s.max(1.0 / disc);
            }
            s
        });
        1.0 / best
    }

    /// Best planar clearance `max_{v in plane} delta(x, plane)` found by the
    /// plane search. The returned value never exceeds the true maximum.
    pub fn best_planar_clearance(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        let (xl, vl) = self.local_args(x, v)?;
        let vu = crate::linalg::normalized(&vl)?;
        let local = &self.local;
        Ok(self.search_planes(&vu, |plane, best| {
            local.planar_distance_unchecked(&xl, plane, best.max(0.0))
        }))
    }
}

impl Finsler for MetricEvaluator<'_> {
    fn dim(&self) -> usize {
        self.body.dim()
    }

    fn eval(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        let (xl, vl) = self.local_args(x, v)?;
        if vl.iter().all(|c| *c == 0.0) {
            return Ok(0.0);
        }
        match self.tag {
            MetricTag::ExactMinimal => self.exact(&xl, &vl),
            MetricTag::Hilbert => Ok(self.hilbert(&xl, &vl)),
            MetricTag::MinimalLower => Ok(0.5 * self.hilbert(&xl, &vl)),
            MetricTag::ModelF => self.model(&xl, &vl),
            MetricTag::MinimalUpper => Ok(self.upper(&xl, &vl)),
        }
    }

    fn label(&self) -> &str {
        self.tag.as_str()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ev(tag: MetricTag, b: &ConvexBody, x: &[f64], v: &[f64]) -> f64 {
        MetricEvaluator::new(tag, b).eval(x, v).unwrap()
    }

    #[test]
    fn ball_minimal_examples() {
        assert_abs_diff_eq!(ball_minimal(&[0.0; 3], &[0.3, -2.0, 1.0]).unwrap(), norm(&[0.3, -2.0, 1.0]));
        assert_abs_diff_eq!(ball_minimal(&[0.5, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            ball_minimal(&[0.5, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(),
            2.0 / 3f64.sqrt(),
            epsilon = 1e-15
        );
        assert_eq!(ball_minimal(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), Err(Error::NotInterior));
    }

    #[test]
    fn halfspace_minimal_examples() {
        assert_eq!(halfspace_minimal(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap(), 0.5);
        assert_eq!(halfspace_minimal(&[0.7, 3.0, 1.0], &[0.0, 1.0, -4.0]).unwrap(), 0.0);
        assert_eq!(halfspace_minimal(&[0.25, 0.0, 0.0], &[3.0, 0.0, 0.0]).unwrap(), 6.0);
        assert_eq!(halfspace_minimal(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), Err(Error::NotInterior));
    }

    #[test]
    fn hilbert_examples() {
        let b = ConvexBody::unit_ball(3);
        assert_abs_diff_eq!(ev(MetricTag::Hilbert, &b, &[0.5, 0.0, 0.0], &[1.0, 0.0, 0.0]), 4.0 / 3.0, epsilon = 1e-15);
        let h = ConvexBody::upper_halfspace(3);
        assert_eq!(ev(MetricTag::Hilbert, &h, &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), 0.5);
        let rxb = ConvexBody::product(vec![crate::body::Factor::Line, crate::body::Factor::Ball { dim: 2, radius: 1.0 }]).unwrap();
        assert_eq!(ev(MetricTag::Hilbert, &rxb, &[4.0, 0.2, -0.1], &[1.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn model_metric_examples() {
        let b = ConvexBody::unit_ball(3);
        let f = MetricEvaluator::new(MetricTag::ModelF, &b).with_collar(0.5);
        assert_abs_diff_eq!(f.eval(&[0.99, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap(), 50.0, epsilon = 1e-9);
        assert_abs_diff_eq!(f.eval(&[0.99, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), 10.0, epsilon = 1e-9);
        assert_eq!(f.eval(&[0.2, 0.0, 0.0], &[0.0; 3]).unwrap(), 0.0);
        // Outside the collar the constant matches radial vectors on {delta = eps}.
        assert_abs_diff_eq!(f.eval(&[0.1, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn upper_and_lower_examples() {
        let b = ConvexBody::unit_ball(3);
        assert_abs_diff_eq!(ev(MetricTag::MinimalUpper, &b, &[0.0; 3], &[1.0, 0.0, 0.0]), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            ev(MetricTag::MinimalUpper, &b, &[0.5, 0.0, 0.0], &[0.0, 1.0, 0.0]),
            2.0 / 3f64.sqrt(),
            epsilon = 1e-9
        );
        let h = ConvexBody::upper_halfspace(3);
        assert_eq!(ev(MetricTag::MinimalUpper, &h, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]), 0.0);
        assert_abs_diff_eq!(ev(MetricTag::MinimalLower, &b, &[0.0; 3], &[1.0, 0.0, 0.0]), 0.5);
        assert_abs_diff_eq!(ev(MetricTag::MinimalLower, &h, &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), 0.25);
    }

    #[test]
    fn upper_search_in_higher_dimension_is_exact_on_the_ball() {
        let b = ConvexBody::unit_ball(5);
        let x = [0.3, -0.2, 0.1, 0.4, 0.0];
        let v = [0.5, 1.0, 0.0, -0.3, 0.2];
        let exact = ball_minimal(&x, &v).unwrap();
        let upper = ev(MetricTag::MinimalUpper, &b, &x, &v);
        assert!(upper >= exact - 1e-12);
        assert!(upper <= exact * 1.01, "{upper} vs {exact}");
    }

    #[test]
    fn tags_round_trip() {
        for t in MetricTag::ALL {
            assert_eq!(t.as_str().parse::<MetricTag>().unwrap(), t);
        }
        assert!("kobayashi".parse::<MetricTag>().is_err());
    }
}
