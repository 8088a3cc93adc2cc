//! Convex body catalog and geometric oracles.
//!
//! A [`ConvexBody`] is a canonical [`Shape`] in local coordinates placed in
//! space by a rigid frame. All oracles take and return world coordinates.

mod ellipsoid;
mod polytope;
mod shape;
pub mod spec;

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;

pub use polytope::Face;
pub use shape::{Factor, Shape};

use crate::error::{Error, Result};
use crate::linalg::{check_dim, complement_basis, dist, dot, Buf, Plane2, Rigid};

/// Absolute tolerance of the membership classification around the boundary.
pub const BOUNDARY_TOL: f64 = 1e-10;

const PLANAR_GRID: usize = 256;
const PLANAR_STARTS: usize = 3;
const ANGLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    Ball,
    HalfSpace,
    Ellipsoid,
    Cylinder,
    Polytope,
    Product,
}

impl BodyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BodyKind::Ball => "ball",
            BodyKind::HalfSpace => "halfspace",
            BodyKind::Ellipsoid => "ellipsoid",
            BodyKind::Cylinder => "cylinder",
            BodyKind::Polytope => "polytope",
            BodyKind::Product => "product",
        }
    }
}

/// A boundary point with its outer unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub point: Vec<f64>,
    pub normal: Vec<f64>,
}

/// Nearest-point data of a collar point and the split of a vector against
/// the normal at its foot.
#[derive(Debug, Clone, PartialEq)]
pub struct CollarDecomposition {
    pub delta: f64,
    pub projection: BoundaryPoint,
    pub v_normal: Vec<f64>,
    pub v_tangent: Vec<f64>,
}

/// A flat disc `{center + s a + t b : s^2 + t^2 < radius^2}` on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatPatch {
    pub center: Vec<f64>,
    pub plane: Plane2,
    pub radius: f64,
}

impl FlatPatch {
    /// Point of the patch at polar coordinates `(r, theta)`, `0 <= r < 1`
    /// as a fraction of the radius.
    pub fn point(&self, r: f64, theta: f64) -> Vec<f64> {
        let dir = self.plane.direction(theta);
        self.center
            .iter()
            .zip(&dir)
            .map(|(c, d)| c + r * self.radius * d)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ConvexBody {
    dim: usize,
    shape: Shape,
    frame: Rigid,
    identity: bool,
    collar: f64,
    lineality: usize,
}

impl PartialEq for ConvexBody {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.frame == other.frame
    }
}

impl ConvexBody {
    pub fn new(dim: usize, shape: Shape) -> Result<Self> {
        Self::with_frame(shape, Rigid::identity(dim))
    }

    pub fn with_frame(shape: Shape, frame: Rigid) -> Result<Self> {
        let dim = frame.dim();
        if dim < 3 {
            return Err(Error::InvalidBody(format!("dimension must be at least 3, got {dim}")));
        }
        shape.validate(dim)?;
        let collar = shape.collar();
        let lineality = shape.lineality(dim);
        Ok(Self {
            dim,
            identity: frame.is_identity(),
            shape,
            frame,
            collar,
            lineality,
        })
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::ball(vec![0.0; dim], 1.0).expect("unit ball is valid")
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let dim = center.len();
        Self::new(dim, Shape::Ball { center, radius })
    }

    /// `{x : x_1 > 0}`.
    pub fn upper_halfspace(dim: usize) -> Self {
        let mut n = vec![0.0; dim];
        n[0] = -1.0;
        Self::halfspace(&n, 0.0).expect("upper half-space is valid")
    }

    /// `{x : <normal, x> < offset}`.
    pub fn halfspace(normal: &[f64], offset: f64) -> Result<Self> {
        let face = Face::new(normal, offset)
            .ok_or_else(|| Error::InvalidBody("half-space normal must be nonzero".into()))?;
        Self::new(normal.len(), Shape::HalfSpace(face))
    }

    pub fn ellipsoid(center: Vec<f64>, semi_axes: Vec<f64>) -> Result<Self> {
        let dim = center.len();
        Self::new(dim, Shape::Ellipsoid { center, semi_axes })
    }

    /// `B^{d-1}(radius) x (0, height)` with the axis along the last coordinate.
    pub fn cylinder(dim: usize, radius: f64, height: f64) -> Result<Self> {
        Self::new(dim, Shape::Cylinder { radius, height })
    }

    /// Intersection of half-spaces `<n_i, x> < b_i`; `anchor` must be strictly inside.
    pub fn polytope(halfspaces: &[(Vec<f64>, f64)], anchor: Vec<f64>) -> Result<Self> {
        let faces = halfspaces
            .iter()
            .map(|(n, b)| {
                Face::new(n, *b)
                    .ok_or_else(|| Error::InvalidBody("half-space normal must be nonzero".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(anchor.len(), Shape::Polytope { faces, anchor })
    }

    /// Bounded polytope circumscribed about the unit sphere: faces tangent at
    /// `n_faces` random unit normals, redrawn until the intersection is bounded.
    pub fn random_tangent_polytope<R: Rng + ?Sized>(
        dim: usize,
        n_faces: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if n_faces <= dim {
            return Err(Error::InvalidBody(format!(
                "a bounded polytope in dimension {dim} needs more than {dim} faces"
            )));
        }
        for _ in 0..1000 {
            let faces: Vec<Face> = (0..n_faces)
                .map(|_| loop {
                    let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                    if let Some(f) = Face::new(&g, crate::linalg::norm(&g)) {
                        break f;
                    }
                })
                .collect();
            if polytope::is_bounded(&faces, dim) {
                return Self::new(
                    dim,
                    Shape::Polytope {
                        faces,
                        anchor: vec![0.0; dim],
                    },
                );
            }
        }
        Err(Error::InvalidBody("could not draw a bounded polytope".into()))
    }

    pub fn product(factors: Vec<Factor>) -> Result<Self> {
        let dim = factors.iter().map(Factor::dim).sum();
        Self::new(dim, Shape::Product { factors })
    }

    /// The same shape moved by `motion` (applied after the current frame).
    pub fn transformed(&self, motion: &Rigid) -> Result<Self> {
        check_dim(self.dim, &vec![0.0; motion.dim()])?;
        Self::with_frame(self.shape.clone(), motion.compose(&self.frame))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BodyKind {
        match self.shape {
            Shape::Ball { .. } => BodyKind::Ball,
            Shape::HalfSpace(_) => BodyKind::HalfSpace,
            Shape::Ellipsoid { .. } => BodyKind::Ellipsoid,
            Shape::Cylinder { .. } => BodyKind::Cylinder,
            Shape::Polytope { .. } => BodyKind::Polytope,
            Shape::Product { .. } => BodyKind::Product,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn frame(&self) -> &Rigid {
        &self.frame
    }

    /// The same shape in its own local coordinates.
    pub fn local(&self) -> ConvexBody {
        Self {
            frame: Rigid::identity(self.dim),
            identity: true,
            ..self.clone()
        }
    }

    /// Width of the boundary collar in which the nearest boundary point is
    /// unique away from ties between boundary pieces (`inf` when every
    /// interior point qualifies).
    pub fn collar_width(&self) -> f64 {
        self.collar
    }

    /// Dimension of the largest affine subspace contained in the body.
    pub fn lineality(&self) -> usize {
        self.lineality
    }

    pub fn contains_two_flat(&self) -> bool {
        self.lineality >= 2
    }

    /// A two-dimensional flat disc in the boundary, when the shape has one.
    pub fn flat_boundary_patch(&self) -> Option<FlatPatch> {
        let (center, a, b, radius) = match &self.shape {
            Shape::HalfSpace(face) => {
                let c: Vec<f64> = face.normal.iter().map(|n| n * face.offset).collect();
                let basis = complement_basis(&face.normal);
                (c, basis[0].to_vec(), basis[1].to_vec(), 1.0)
            }
            Shape::Cylinder { radius, .. } if self.dim >= 3 => (
                vec![0.0; self.dim],
                crate::linalg::unit(self.dim, 0),
                crate::linalg::unit(self.dim, 1),
                *radius,
            ),
            _ => return None,
        };
        let plane = Plane2 {
            a: self.frame.rotate(&a).to_vec(),
            b: self.frame.rotate(&b).to_vec(),
        };
        Some(FlatPatch {
            center: self.frame.apply(&center).to_vec(),
            plane,
            radius,
        })
    }

    /// A fixed interior point.
    pub fn anchor(&self) -> Vec<f64> {
        self.frame.apply(&self.shape.anchor(self.dim)).to_vec()
    }

    /// Axis-aligned box containing the body, if it is bounded.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let (lo, hi) = self.shape.bounding_box(self.dim)?;
        if self.identity {
            return Some((lo, hi));
        }
        if let Shape::Ball { center, radius } = &self.shape {
            let c = self.frame.apply(center);
            return Some((
                c.iter().map(|x| x - radius).collect(),
                c.iter().map(|x| x + radius).collect(),
            ));
        }
        // Image of the local box: hull of its mapped corners.
        let d = self.dim;
        let mut wlo = vec![f64::INFINITY; d];
        let mut whi = vec![f64::NEG_INFINITY; d];
        for mask in 0..(1usize << d) {
            let corner: Vec<f64> = (0..d)
                .map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] })
                .collect();
            let w = self.frame.apply(&corner);
            for i in 0..d {
                wlo[i] = wlo[i].min(w[i]);
                whi[i] = whi[i].max(w[i]);
            }
        }
        Some((wlo, whi))
    }

    pub fn is_bounded(&self) -> bool {
        self.shape.bounding_box(self.dim).is_some()
    }

    /// Euclidean diameter, `inf` for unbounded bodies.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::Ellipsoid { semi_axes, .. } => 2.0 * semi_axes.iter().copied().fold(0.0, f64::max),
            _ => match self.shape.bounding_box(self.dim) {
                Some((lo, hi)) => dist(&lo, &hi),
                None => f64::INFINITY,
            },
        }
    }

    #[inline]
    pub(crate) fn to_local(&self, x: &[f64]) -> Buf {
        if self.identity {
            x.iter().copied().collect()
        } else {
            self.frame.apply_inv(x)
        }
    }

    #[inline]
    pub(crate) fn dir_to_local(&self, v: &[f64]) -> Buf {
        if self.identity {
            v.iter().copied().collect()
        } else {
            self.frame.rotate_inv(v)
        }
    }

    #[inline]
    fn to_world(&self, x: &[f64]) -> Vec<f64> {
        if self.identity {
            x.to_vec()
        } else {
            self.frame.apply(x).to_vec()
        }
    }

    #[inline]
    fn dir_to_world(&self, v: &[f64]) -> Vec<f64> {
        if self.identity {
            v.to_vec()
        } else {
            self.frame.rotate(v).to_vec()
        }
    }

    fn plane_to_local(&self, plane: &Plane2) -> Plane2 {
        Plane2 {
            a: self.dir_to_local(&plane.a).to_vec(),
            b: self.dir_to_local(&plane.b).to_vec(),
        }
    }

    /// Signed Euclidean distance to the boundary: `-delta` inside, positive outside.
    pub fn signed_distance(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x)?;
        Ok(self.shape.signed_distance(&self.to_local(x)))
    }

    pub fn contains(&self, x: &[f64]) -> Result<Region> {
        let s = self.signed_distance(x)?;
        Ok(if s < -BOUNDARY_TOL {
            Region::Interior
        } else if s <= BOUNDARY_TOL {
            Region::Boundary
        } else {
            Region::Exterior
        })
    }

    pub fn is_interior(&self, x: &[f64]) -> bool {
        matches!(self.contains(x), Ok(Region::Interior))
    }

    fn require_interior(&self, x: &[f64]) -> Result<()> {
        match self.contains(x)? {
            Region::Interior => Ok(()),
            _ => Err(Error::NotInterior),
        }
    }

    /// Fails unless `xi` lies on the boundary within [`BOUNDARY_TOL`].
    pub fn require_boundary(&self, xi: &[f64]) -> Result<()> {
        let s = self.signed_distance(xi)?;
        if s.abs() <= BOUNDARY_TOL {
            Ok(())
        } else {
            Err(Error::NotOnBoundary { signed_distance: s })
        }
    }

    /// `(t_minus, t_plus)` in units of `v` without validating the inputs.
    #[inline]
    pub(crate) fn chord_unchecked(&self, x: &[f64], v: &[f64]) -> (f64, f64) {
        if self.identity {
            self.shape.chord(x, v)
        } else {
            self.shape.chord(&self.to_local(x), &self.dir_to_local(v))
        }
    }

    /// Parameters of the two line exits: `x + t v` is inside exactly for
    /// `-t_minus < t < t_plus`. Infinite values mean the line does not exit.
    pub fn chord(&self, x: &[f64], v: &[f64]) -> Result<(f64, f64)> {
        check_dim(self.dim, v)?;
        self.require_interior(x)?;
        if v.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(self.chord_unchecked(x, v))
    }

    /// First exit parameter `t+` of the ray `x + t v`, in units of `v`.
    pub fn ray_exit(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        Ok(self.chord(x, v)?.1)
    }

    pub fn boundary_distance(&self, x: &[f64]) -> Result<f64> {
        let s = self.signed_distance(x)?;
        if s < -BOUNDARY_TOL {
            Ok(-s)
        } else {
            Err(Error::NotInterior)
        }
    }

    /// Unique nearest boundary point, or [`Error::AmbiguousProjection`].
    pub fn nearest_boundary(&self, x: &[f64]) -> Result<BoundaryPoint> {
        self.require_interior(x)?;
        let (p, n) = self.shape.nearest(&self.to_local(x))?;
        Ok(BoundaryPoint {
            point: self.to_world(&p),
            normal: self.dir_to_world(&n),
        })
    }

    pub fn collar_decompose(&self, x: &[f64], v: &[f64]) -> Result<CollarDecomposition> {
        check_dim(self.dim, v)?;
        let delta = self.boundary_distance(x)?;
        if delta > self.collar {
            return Err(Error::OutsideCollar {
                delta,
                epsilon: self.collar,
            });
        }
        let projection = self.nearest_boundary(x)?;
        let c = dot(v, &projection.normal);
        let v_normal: Vec<f64> = projection.normal.iter().map(|n| c * n).collect();
        let v_tangent = v.iter().zip(&v_normal).map(|(a, b)| a - b).collect();
        Ok(CollarDecomposition {
            delta,
            projection,
            v_normal,
            v_tangent,
        })
    }

    /// Clearance `delta(x, plane)`: the distance from `x` to the boundary of
    /// the slice `(x + plane) ∩ D`.
    pub fn planar_distance(&self, x: &[f64], plane: &Plane2) -> Result<f64> {
        check_dim(self.dim, &plane.a)?;
        check_dim(self.dim, &plane.b)?;
        if (dot(&plane.a, &plane.a) - 1.0).abs() > 1e-9
            || (dot(&plane.b, &plane.b) - 1.0).abs() > 1e-9
            || dot(&plane.a, &plane.b).abs() > 1e-9
        {
            return Err(Error::DegeneratePlane);
        }
        self.require_interior(x)?;
        Ok(self.planar_distance_unchecked(x, plane, 0.0))
    }

    /// As [`planar_distance`](Self::planar_distance), but may stop early and
    /// return any value below `cutoff` once the clearance is known to be
    /// below it.
    pub(crate) fn planar_distance_unchecked(&self, x: &[f64], plane: &Plane2, cutoff: f64) -> f64 {
        let xl = self.to_local(x);
        let pl = self.plane_to_local(plane);
        if let Some(d) = self.shape.planar_closed_form(&xl, &pl) {
            return d;
        }
        planar_search(&self.shape, &xl, &pl, cutoff)
    }

    /// Hyperbolic bound from the largest disc of the slice through `x`
    /// spanned by `plane`, when the slice shape is known in closed form.
    pub(crate) fn slice_disc_bound(&self, x: &[f64], v: &[f64], plane: &Plane2) -> Option<f64> {
        self.shape
            .slice_disc_bound(&self.to_local(x), &self.dir_to_local(v), &self.plane_to_local(plane))
    }

    /// Uniformly random interior point by rejection from the bounding box.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<f64>> {
        let (lo, hi) = self.bounding_box()?;
        for _ in 0..100_000 {
            let x: Vec<f64> = lo
                .iter()
                .zip(&hi)
                .map(|(l, h)| l + (h - l) * rng.random::<f64>())
                .collect();
            if self.is_interior(&x) {
                return Some(x);
            }
        }
        None
    }
}

/// Exit distance along `dir(theta)`; the chord in local coordinates.
#[inline]
fn exit_at(shape: &Shape, x: &[f64], plane: &Plane2, theta: f64) -> f64 {
    shape.chord(x, &plane.direction(theta)).1
}

fn planar_search(shape: &Shape, x: &[f64], plane: &Plane2, cutoff: f64) -> f64 {
    let step = TAU / PLANAR_GRID as f64;
    let half = PLANAR_GRID / 2;
    let mut grid = [0.0f64; PLANAR_GRID];
    for k in 0..half {
        let (tm, tp) = shape.chord(x, &plane.direction(k as f64 * step));
        grid[k] = tp;
        grid[k + half] = tm;
        if tp.min(tm) < cutoff {
            return tp.min(tm);
        }
    }
    let mut order: Vec<usize> = (0..PLANAR_GRID).collect();
    order.sort_by(|&i, &j| grid[i].total_cmp(&grid[j]));
    let mut best = grid[order[0]];
    if !best.is_finite() {
        return best;
    }
    let mut starts: Vec<usize> = Vec::with_capacity(PLANAR_STARTS);
    for &k in &order {
        if starts.len() == PLANAR_STARTS {
            break;
        }
        // Neighbouring samples bracket the same local minimum.
        if starts
            .iter()
            .all(|&s| (s as isize - k as isize).rem_euclid(PLANAR_GRID as isize) > 1
                && (k as isize - s as isize).rem_euclid(PLANAR_GRID as isize) > 1)
        {
            starts.push(k);
        }
    }
    for k in starts {
        let center = k as f64 * step;
        let (_, v) = golden_min(|th| exit_at(shape, x, plane, th), center - step, center + step);
        best = best.min(v);
    }
    best
}

/// Golden-section minimization on `[a, b]`; returns `(argmin, min)`.
pub(crate) fn golden_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > ANGLE_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Coordinate plane `span(e_i, e_j)`.
pub fn plane_from_axes(dim: usize, i: usize, j: usize) -> Plane2 {
    Plane2 {
        a: crate::linalg::unit(dim, i),
        b: crate::linalg::unit(dim, j),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn slice_closed_forms_match_the_direction_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bodies = [
            ConvexBody::ellipsoid(vec![0.2, -0.1, 0.3], vec![1.0, 2.0, 0.5]).unwrap(),
            ConvexBody::cylinder(3, 1.0, 2.0).unwrap(),
            ConvexBody::ellipsoid(vec![0.0; 4], vec![1.0, 1.5, 0.7, 3.0]).unwrap(),
        ];
        for b in &bodies {
            let d = b.dim();
            for _ in 0..200 {
                let x = b.sample_interior(&mut rng).unwrap();
                let g = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..d).map(|_| rng.random::<f64>() - 0.5).collect() };
                let plane = Plane2::span(&g(&mut rng), &g(&mut rng)).unwrap();
                let Some(closed) = b.shape.planar_closed_form(&x, &plane) else {
                    continue;
                };
                let numeric = planar_search(&b.shape, &x, &plane, 0.0);
                assert_abs_diff_eq!(closed, numeric, epsilon = 1e-7);
            }
        }
        // A plane containing the cylinder axis slices a rectangle.
        let c = ConvexBody::cylinder(3, 1.0, 2.0).unwrap();
        let d = c.planar_distance(&[0.3, 0.0, 1.8], &plane_from_axes(3, 0, 2)).unwrap();
        assert_abs_diff_eq!(d, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn membership_examples() {
        let b = ConvexBody::unit_ball(3);
        assert_eq!(b.contains(&[0.0, 0.0, 0.0]).unwrap(), Region::Interior);
        assert_eq!(b.contains(&[1.0, 0.0, 0.0]).unwrap(), Region::Boundary);
        let h = ConvexBody::upper_halfspace(3);
        assert_eq!(h.contains(&[-1.0, 0.0, 0.0]).unwrap(), Region::Exterior);
        assert_eq!(
            b.contains(&[0.0, 0.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn ray_exit_examples() {
        let b = ConvexBody::unit_ball(3);
        assert_eq!(b.ray_exit(&[0.0; 3], &[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(b.ray_exit(&[0.5, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap(), 0.5, epsilon = 1e-15);
        let h = ConvexBody::upper_halfspace(3);
        assert_eq!(h.ray_exit(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), f64::INFINITY);
        assert_eq!(b.ray_exit(&[0.0; 3], &[0.0; 3]), Err(Error::ZeroVector));
    }

    #[test]
    fn boundary_distance_examples() {
        let b = ConvexBody::unit_ball(3);
        assert_abs_diff_eq!(b.boundary_distance(&[0.25, 0.0, 0.0]).unwrap(), 0.75);
        let h = ConvexBody::upper_halfspace(3);
        assert_eq!(h.boundary_distance(&[2.0, 5.0, -3.0]).unwrap(), 2.0);
        let c = ConvexBody::cylinder(3, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(c.boundary_distance(&[0.0, 0.0, 0.1]).unwrap(), 0.1, epsilon = 1e-15);
        assert_eq!(b.boundary_distance(&[2.0, 0.0, 0.0]), Err(Error::NotInterior));
    }

    #[test]
    fn collar_examples() {
        let b = ConvexBody::unit_ball(3);
        let c = b.collar_decompose(&[0.9, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(c.delta, 0.1, epsilon = 1e-15);
        assert_eq!(c.projection.point, vec![1.0, 0.0, 0.0]);
        assert_eq!(c.v_normal, vec![0.0, 0.0, 0.0]);
        assert_eq!(c.v_tangent, vec![0.0, 1.0, 0.0]);
        let c = b.collar_decompose(&[0.8, 0.0, 0.0], &[1.0, 1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(c.delta, 0.2, epsilon = 1e-15);
        assert_eq!(c.v_normal, vec![1.0, 0.0, 0.0]);
        assert_eq!(c.v_tangent, vec![0.0, 1.0, 0.0]);
        assert_eq!(
            b.collar_decompose(&[0.0; 3], &[1.0, 0.0, 0.0]),
            Err(Error::AmbiguousProjection)
        );
        let cyl = ConvexBody::cylinder(3, 1.0, 1.0).unwrap();
        assert_eq!(
            cyl.collar_decompose(&[0.0, 0.0, 0.5], &[1.0, 0.0, 0.0]),
            Err(Error::AmbiguousProjection)
        );
    }

    #[test]
    fn planar_distance_examples() {
        let b = ConvexBody::unit_ball(3);
        let p = plane_from_axes(3, 1, 2);
        assert_abs_diff_eq!(b.planar_distance(&[0.0; 3], &p).unwrap(), 1.0);
        assert_abs_diff_eq!(
            b.planar_distance(&[0.5, 0.0, 0.0], &p).unwrap(),
            0.75f64.sqrt(),
            epsilon = 1e-15
        );
        let h = ConvexBody::upper_halfspace(3);
        assert_eq!(h.planar_distance(&[1.0, 0.0, 0.0], &p).unwrap(), f64::INFINITY);
        let bad = Plane2 {
            a: vec![1.0, 0.0, 0.0],
            b: vec![1.0, 0.0, 0.0],
        };
        assert_eq!(b.planar_distance(&[0.0; 3], &bad), Err(Error::DegeneratePlane));
    }

    #[test]
    fn numeric_planar_search_matches_closed_form_on_a_ball() {
        // Route the ball through the numeric path by expressing it as an ellipsoid.
        let e = ConvexBody::ellipsoid(vec![0.0; 3], vec![1.0; 3]).unwrap();
        let b = ConvexBody::unit_ball(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = b.sample_interior(&mut rng).unwrap();
            let u: Vec<f64> = (0..3).map(|_| rng.sample(StandardNormal)).collect();
            let w: Vec<f64> = (0..3).map(|_| rng.sample(StandardNormal)).collect();
            let p = Plane2::span(&u, &w).unwrap();
            let exact = b.planar_distance(&x, &p).unwrap();
            let numeric = e.planar_distance(&x, &p).unwrap();
            assert!((exact - numeric).abs() < 1e-9, "{exact} vs {numeric} at {x:?} {p:?}");
        }
    }

    #[test]
    fn classification_flags() {
        assert!(!ConvexBody::unit_ball(3).contains_two_flat());
        assert!(ConvexBody::upper_halfspace(3).contains_two_flat());
        let rxb = ConvexBody::product(vec![Factor::Line, Factor::Ball { dim: 2, radius: 1.0 }]).unwrap();
        assert!(!rxb.contains_two_flat());
        let r2xi = ConvexBody::product(vec![Factor::Space(2), Factor::Interval { lo: 0.0, hi: 1.0 }]).unwrap();
        assert!(r2xi.contains_two_flat());
        let cyl = ConvexBody::cylinder(3, 1.0, 1.0).unwrap();
        assert!(!cyl.contains_two_flat());
        let patch = cyl.flat_boundary_patch().unwrap();
        for (r, th) in [(0.0, 0.0), (0.5, 1.0), (0.99, 4.0)] {
            assert_eq!(cyl.contains(&patch.point(r, th)).unwrap(), Region::Boundary);
        }
    }

    #[test]
    fn random_polytope_contains_unit_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = ConvexBody::random_tangent_polytope(3, 20, &mut rng).unwrap();
        assert!(p.is_bounded());
        let d = p.boundary_distance(&[0.0; 3]).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
    }
}
