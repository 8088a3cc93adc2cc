//! Canonical shapes and their oracles in body-local coordinates.

use super::ellipsoid;
use super::polytope::{self, Face};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Buf, Plane2};

/// Relative tolerance for deciding that two candidate boundary pieces are
/// equidistant (cut locus).
pub(crate) const TIE_TOL: f64 = 1e-9;

/// One factor of a product body, occupying a block of coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// The whole real line.
    Line,
    /// The whole of `R^k`.
    Space(usize),
    /// `(0, +inf)`.
    HalfLine,
    /// `(lo, hi)`.
    Interval { lo: f64, hi: f64 },
    /// Centered open ball of radius `radius` in `R^dim`.
    Ball { dim: usize, radius: f64 },
}

impl Factor {
    pub fn dim(&self) -> usize {
        match self {
            Factor::Line | Factor::HalfLine | Factor::Interval { .. } => 1,
            Factor::Space(k) => *k,
            Factor::Ball { dim, .. } => *dim,
        }
    }

    fn lineality(&self) -> usize {
        match self {
            Factor::Line => 1,
            Factor::Space(k) => *k,
            _ => 0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Factor::Space(0) => Err(Error::InvalidBody("space factor needs k >= 1".into())),
            Factor::Interval { lo, hi } if !(lo < hi) || !lo.is_finite() || !hi.is_finite() => {
                Err(Error::InvalidBody(format!("empty interval ({lo}, {hi})")))
            }
            Factor::Ball { dim, radius } if *dim == 0 || !(*radius > 0.0) || !radius.is_finite() => {
                Err(Error::InvalidBody("ball factor needs dim >= 1 and radius > 0".into()))
            }
            _ => Ok(()),
        }
    }

    fn collar(&self) -> f64 {
        match self {
            Factor::Line | Factor::Space(_) | Factor::HalfLine => f64::INFINITY,
            Factor::Interval { lo, hi } => 0.5 * (hi - lo),
            Factor::Ball { radius, .. } => *radius,
        }
    }

    fn anchor(&self) -> Vec<f64> {
        match self {
            Factor::HalfLine => vec![1.0],
            Factor::Interval { lo, hi } => vec![0.5 * (lo + hi)],
            f => vec![0.0; f.dim()],
        }
    }

    fn bbox(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Factor::Interval { lo, hi } => Some((vec![*lo], vec![*hi])),
            Factor::Ball { dim, radius } => Some((vec![-radius; *dim], vec![*radius; *dim])),
            _ => None,
        }
    }

    fn chord(&self, x: &[f64], v: &[f64]) -> (f64, f64) {
        match self {
            Factor::Line | Factor::Space(_) => (f64::INFINITY, f64::INFINITY),
            Factor::HalfLine => linear_chord(x[0], -v[0]),
            Factor::Interval { lo, hi } => {
                let (am, ap) = linear_chord(hi - x[0], v[0]);
                let (bm, bp) = linear_chord(x[0] - lo, -v[0]);
                (am.min(bm), ap.min(bp))
            }
            Factor::Ball { radius, .. } => {
                quadratic_chord(dot(v, v), dot(x, v), dot(x, x) - radius * radius)
            }
        }
    }

    /// Signed distance to this factor's boundary (negative inside).
    fn signed(&self, x: &[f64]) -> f64 {
        match self {
            Factor::Line | Factor::Space(_) => f64::NEG_INFINITY,
            Factor::HalfLine => -x[0],
            Factor::Interval { lo, hi } => (lo - x[0]).max(x[0] - hi),
            Factor::Ball { radius, .. } => norm(x) - radius,
        }
    }

    fn nearest(&self, x: &[f64]) -> Result<(Buf, Buf)> {
        match self {
            Factor::Line | Factor::Space(_) => Err(Error::AmbiguousProjection),
            Factor::HalfLine => Ok((smallvec::smallvec![0.0], smallvec::smallvec![-1.0])),
            Factor::Interval { lo, hi } => {
                let (dl, dh) = (x[0] - lo, hi - x[0]);
                if (dl - dh).abs() <= TIE_TOL * (hi - lo) {
                    Err(Error::AmbiguousProjection)
                } else if dl < dh {
                    Ok((smallvec::smallvec![*lo], smallvec::smallvec![-1.0]))
                } else {
                    Ok((smallvec::smallvec![*hi], smallvec::smallvec![1.0]))
                }
            }
            Factor::Ball { radius, .. } => {
                let r = norm(x);
                if r <= TIE_TOL * radius {
                    return Err(Error::AmbiguousProjection);
                }
                let n: Buf = x.iter().map(|c| c / r).collect();
                Ok((n.iter().map(|c| c * radius).collect(), n))
            }
        }
    }
}

/// Canonical shapes. The parameters are in body-local coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Ball { center: Vec<f64>, radius: f64 },
    HalfSpace(Face),
    /// Axis-aligned ellipsoid.
    Ellipsoid { center: Vec<f64>, semi_axes: Vec<f64> },
    /// `B^{d-1}(radius) x (0, height)`, axis along the last coordinate.
    Cylinder { radius: f64, height: f64 },
    Polytope { faces: Vec<Face>, anchor: Vec<f64> },
    Product { factors: Vec<Factor> },
}

/// Exit parameters of `s > t*rate` style constraints: the constraint is
/// `slack - t * rate > 0`.
#[inline]
fn linear_chord(slack: f64, rate: f64) -> (f64, f64) {
    if rate > 0.0 {
        (f64::INFINITY, slack / rate)
    } else if rate < 0.0 {
        (slack / -rate, f64::INFINITY)
    } else {
        (f64::INFINITY, f64::INFINITY)
    }
}

/// Roots of `a t^2 + 2 b t + c = 0` with `c < 0`, as `(-t_min, t_max)`.
#[inline]
fn quadratic_chord(a: f64, b: f64, c: f64) -> (f64, f64) {
    if a <= 0.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    let disc = (b * b - a * c).max(0.0);
    let sq = disc.sqrt();
    let q = -(b + b.signum() * sq);
    let (r1, r2) = if q != 0.0 {
        (q / a, c / q)
    } else {
        ((-b + sq) / a, (-b - sq) / a)
    };
    let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    ((-lo).max(0.0), hi.max(0.0))
}

fn pick_unique(candidates: &mut [(f64, usize)], scale: f64) -> Result<usize> {
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    if candidates.len() > 1 && candidates[1].0 - candidates[0].0 <= TIE_TOL * scale {
        return Err(Error::AmbiguousProjection);
    }
    Ok(candidates[0].1)
}

impl Shape {
    pub(crate) fn validate(&self, dim: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidBody(m));
        match self {
            Shape::Ball { center, radius } => {
                if center.len() != dim {
                    return bad(format!("center has {} coordinates, dim is {dim}", center.len()));
                }
                if !(*radius > 0.0) || !radius.is_finite() {
                    return bad(format!("radius must be positive, got {radius}"));
                }
            }
            Shape::HalfSpace(face) => {
                if face.normal.len() != dim {
                    return bad("half-space normal has wrong dimension".into());
                }
            }
            Shape::Ellipsoid { center, semi_axes } => {
                if center.len() != dim || semi_axes.len() != dim {
                    return bad("ellipsoid center/semi_axes have wrong dimension".into());
                }
                if semi_axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
                    return bad("semi-axes must be positive".into());
                }
            }
            Shape::Cylinder { radius, height } => {
                if !(*radius > 0.0 && *height > 0.0) || !radius.is_finite() || !height.is_finite()
                {
                    return bad("cylinder radius and height must be positive".into());
                }
            }
            Shape::Polytope { faces, anchor } => {
                if faces.is_empty() {
                    return bad("polytope needs at least one half-space".into());
                }
                if anchor.len() != dim || faces.iter().any(|f| f.normal.len() != dim) {
                    return bad("polytope data has wrong dimension".into());
                }
                if let Some(f) = faces.iter().find(|f| f.slack(anchor) <= 0.0) {
                    return bad(format!(
                        "anchor is not strictly inside half-space with normal {:?}",
                        f.normal
                    ));
                }
            }
            Shape::Product { factors } => {
                if factors.is_empty() {
                    return bad("product needs at least one factor".into());
                }
                for f in factors {
                    f.validate()?;
                }
                let total: usize = factors.iter().map(Factor::dim).sum();
                if total != dim {
                    return bad(format!("factor dimensions sum to {total}, dim is {dim}"));
                }
                if factors
                    .iter()
                    .all(|f| matches!(f, Factor::Line | Factor::Space(_)))
                {
                    return bad("product of whole spaces is all of R^d".into());
                }
            }
        }
        Ok(())
    }

    fn blocks(factors: &[Factor]) -> impl Iterator<Item = (&Factor, std::ops::Range<usize>)> {
        let mut start = 0;
        factors.iter().map(move |f| {
            let r = start..start + f.dim();
            start = r.end;
            (f, r)
        })
    }

    /// `(t_minus, t_plus)`: the line `x + t v` stays inside for `-t_minus < t < t_plus`.
    #[inline]
    pub(crate) fn chord(&self, x: &[f64], v: &[f64]) -> (f64, f64) {
        match self {
            Shape::Ball { center, radius } => {
                let y: Buf = x.iter().zip(center).map(|(xi, ci)| xi - ci).collect();
                quadratic_chord(dot(v, v), dot(&y, v), crate::linalg::norm2_minus(&y, radius * radius))
            }
            Shape::HalfSpace(face) => linear_chord(face.slack(x), dot(&face.normal, v)),
            Shape::Ellipsoid { center, semi_axes } => {
                let (mut a, mut b, mut c) = (0.0, 0.0, -1.0);
                for i in 0..x.len() {
                    let y = (x[i] - center[i]) / semi_axes[i];
                    let w = v[i] / semi_axes[i];
                    a += w * w;
                    b += y * w;
                    c += y * y;
                }
                quadratic_chord(a, b, c)
            }
            Shape::Cylinder { radius, height } => {
                let d = x.len();
                let (rm, rp) = quadratic_chord(
                    dot(&v[..d - 1], &v[..d - 1]),
                    dot(&x[..d - 1], &v[..d - 1]),
                    dot(&x[..d - 1], &x[..d - 1]) - radius * radius,
                );
                let z = x[d - 1];
                let (am, ap) = linear_chord(height - z, v[d - 1]);
                let (bm, bp) = linear_chord(z, -v[d - 1]);
                (rm.min(am).min(bm), rp.min(ap).min(bp))
            }
            Shape::Polytope { faces, .. } => {
                let (mut tm, mut tp) = (f64::INFINITY, f64::INFINITY);
                for f in faces {
                    let (m, p) = linear_chord(f.slack(x), dot(&f.normal, v));
                    tm = tm.min(m);
                    tp = tp.min(p);
                }
                (tm, tp)
            }
            Shape::Product { factors } => {
                let (mut tm, mut tp) = (f64::INFINITY, f64::INFINITY);
                for (f, r) in Self::blocks(factors) {
                    let (m, p) = f.chord(&x[r.clone()], &v[r]);
                    tm = tm.min(m);
                    tp = tp.min(p);
                }
                (tm, tp)
            }
        }
    }

    /// Signed distance to the boundary: exact inside (`-delta`), and a
    /// positive value vanishing exactly on the boundary outside.
    pub(crate) fn signed_distance(&self, x: &[f64]) -> f64 {
        match self {
            Shape::Ball { center, radius } => crate::linalg::dist(x, center) - radius,
            Shape::HalfSpace(face) => -face.slack(x),
            Shape::Ellipsoid { center, semi_axes } => {
                let y: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let inside = y
                    .iter()
                    .zip(semi_axes)
                    .map(|(yi, ai)| (yi / ai) * (yi / ai))
                    .sum::<f64>()
                    < 1.0;
                let d = match ellipsoid::nearest(&y, semi_axes) {
                    Ok(foot) => foot.distance,
                    // On the medial set; fall back to the axis-wise bound.
                    Err(_) => self.ellipsoid_medial_distance(&y),
                };
                if inside {
                    -d
                } else {
                    d
                }
            }
            Shape::Cylinder { radius, height } => {
                let d = x.len();
                let rho = norm(&x[..d - 1]);
                let z = x[d - 1];
                let lateral = rho - radius;
                let axial = (-z).max(z - height);
                if lateral < 0.0 && axial < 0.0 {
                    lateral.max(axial)
                } else {
                    (lateral.max(0.0).powi(2) + axial.max(0.0).powi(2)).sqrt()
                }
            }
            Shape::Polytope { faces, .. } => faces
                .iter()
                .map(|f| -f.slack(x))
                .fold(f64::NEG_INFINITY, f64::max),
            Shape::Product { factors } => {
                let mut worst = f64::NEG_INFINITY;
                let mut excess = 0.0;
                let mut outside = false;
                for (f, r) in Self::blocks(factors) {
                    let s = f.signed(&x[r]);
                    worst = worst.max(s);
                    if s > 0.0 {
                        outside = true;
                        excess += s * s;
                    }
                }
                if outside {
                    excess.sqrt()
                } else {
                    worst
                }
            }
        }
    }

    fn ellipsoid_medial_distance(&self, y: &[f64]) -> f64 {
        // Points with two or more feet: all feet are equidistant, so any
        // one of them gives the distance. Perturb off the medial set.
        let Shape::Ellipsoid { semi_axes, .. } = self else {
            unreachable!()
        };
        let a_min = semi_axes.iter().copied().fold(f64::INFINITY, f64::min);
        let k = semi_axes.iter().position(|a| *a == a_min).unwrap_or(0);
        let mut yp = y.to_vec();
        yp[k] += 1e-7 * a_min;
        ellipsoid::nearest(&yp, semi_axes)
            .map(|f| f.distance)
            .unwrap_or(a_min)
    }

    /// Nearest boundary point and outer normal for an interior point.
    pub(crate) fn nearest(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        match self {
            Shape::Ball { center, radius } => {
                let y: Buf = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let r = norm(&y);
                if r <= TIE_TOL * radius {
                    return Err(Error::AmbiguousProjection);
                }
                let n: Vec<f64> = y.iter().map(|c| c / r).collect();
                let p = center.iter().zip(&n).map(|(c, ni)| c + radius * ni).collect();
                Ok((p, n))
            }
            Shape::HalfSpace(face) => {
                let s = face.slack(x);
                let p = x.iter().zip(&face.normal).map(|(xi, ni)| xi + s * ni).collect();
                Ok((p, face.normal.clone()))
            }
            Shape::Ellipsoid { center, semi_axes } => {
                let y: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let foot = ellipsoid::nearest(&y, semi_axes)?;
                let n = ellipsoid::normal(&foot.point, semi_axes);
                let p = foot.point.iter().zip(center).map(|(a, b)| a + b).collect();
                Ok((p, n))
            }
            Shape::Cylinder { radius, height } => {
                let d = x.len();
                let rho = norm(&x[..d - 1]);
                let z = x[d - 1];
                let mut cands = [(radius - rho, 0usize), (z, 1), (height - z, 2)];
                let which = pick_unique(&mut cands, radius.max(*height))?;
                let mut p = x.to_vec();
                let mut n = vec![0.0; d];
                match which {
                    0 => {
                        if rho <= TIE_TOL * radius {
                            return Err(Error::AmbiguousProjection);
                        }
                        for i in 0..d - 1 {
                            n[i] = x[i] / rho;
                            p[i] = radius * n[i];
                        }
                    }
                    1 => {
                        p[d - 1] = 0.0;
                        n[d - 1] = -1.0;
                    }
                    _ => {
                        p[d - 1] = *height;
                        n[d - 1] = 1.0;
                    }
                }
                Ok((p, n))
            }
            Shape::Polytope { faces, .. } => {
                let mut cands: Vec<(f64, usize)> =
                    faces.iter().enumerate().map(|(i, f)| (f.slack(x), i)).collect();
                let scale = 1.0 + norm(x);
                let i = pick_unique(&mut cands, scale)?;
                let f = &faces[i];
                let s = f.slack(x);
                let p = x.iter().zip(&f.normal).map(|(xi, ni)| xi + s * ni).collect();
                Ok((p, f.normal.clone()))
            }
            Shape::Product { factors } => {
                let mut cands: Vec<(f64, usize)> = Vec::new();
                for (k, (f, r)) in Self::blocks(factors).enumerate() {
                    let s = f.signed(&x[r]);
                    if s.is_finite() {
                        cands.push((-s, k));
                    }
                }
                let scale = 1.0 + norm(x);
                let k = pick_unique(&mut cands, scale)?;
                let (f, r) = Self::blocks(factors).nth(k).expect("factor index");
                let (fp, fnorm) = f.nearest(&x[r.clone()])?;
                let mut p = x.to_vec();
                let mut n = vec![0.0; x.len()];
                p[r.clone()].copy_from_slice(&fp);
                n[r].copy_from_slice(&fnorm);
                Ok((p, n))
            }
        }
    }

    /// Clearance of `x` inside the slice `(x + plane) ∩ D`, for shapes whose
    /// slices have a closed form.
    pub(crate) fn planar_closed_form(&self, x: &[f64], plane: &Plane2) -> Option<f64> {
        match self {
            Shape::Ball { center, radius } => {
                let y: Buf = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let q = plane.project(&y);
                let q2 = dot(&q, &q);
                let slice_r2 = radius * radius - dot(&y, &y) + q2;
                Some(slice_r2.max(0.0).sqrt() - q2.sqrt())
            }
            Shape::HalfSpace(face) => Some(face_clearance(face, x, plane)),
            Shape::Polytope { faces, .. } => Some(
                faces
                    .iter()
                    .map(|f| face_clearance(f, x, plane))
                    .fold(f64::INFINITY, f64::min),
            ),
            Shape::Ellipsoid { center, semi_axes } => {
                let w: Buf = semi_axes.iter().map(|a| 1.0 / (a * a)).collect();
                let y: Buf = x.iter().zip(center).map(|(a, b)| a - b).collect();
                slice_quadric(&y, plane, &w, 1.0)
            }
            Shape::Cylinder { radius, height } => {
                let d = x.len();
                let mut w: Buf = smallvec::smallvec![1.0; d];
                w[d - 1] = 0.0;
                let round = slice_quadric(x, plane, &w, radius * radius)?;
                let pn = plane.a[d - 1].hypot(plane.b[d - 1]);
                let caps = if pn <= 1e-15 {
                    f64::INFINITY
                } else {
                    x[d - 1].min(height - x[d - 1]) / pn
                };
                Some(round.min(caps))
            }
            _ => None,
        }
    }

    /// Upper bound on the minimal metric from the hyperbolic metric of the
    /// largest disc (or half-plane) inside the slice `(x + plane) ∩ D`.
    pub(crate) fn slice_disc_bound(&self, x: &[f64], v: &[f64], plane: &Plane2) -> Option<f64> {
        match self {
            Shape::Ball { center, radius } => {
                // The slice is a disc of radius R about c; its Poincare
                // metric at x is R |v| / (R^2 - |x - c|^2).
                let y: Buf = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let q = plane.project(&y);
                let slice_r2 = radius * radius - dot(&y, &y) + dot(&q, &q);
                let denom = radius * radius - dot(&y, &y);
                (denom > 0.0).then(|| slice_r2.max(0.0).sqrt() * norm(v) / denom)
            }
            Shape::HalfSpace(face) => {
                // Half-plane slice: |v| / (2 * clearance).
                let pn = norm(&plane.project(&face.normal));
                Some(norm(v) * pn / (2.0 * face.slack(x)))
            }
            _ => None,
        }
    }

    pub(crate) fn collar(&self) -> f64 {
        match self {
            Shape::Ball { radius, .. } => *radius,
            Shape::HalfSpace(_) | Shape::Polytope { .. } => f64::INFINITY,
            Shape::Ellipsoid { semi_axes, .. } => {
                let lo = semi_axes.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = semi_axes.iter().copied().fold(0.0, f64::max);
                lo * lo / hi
            }
            Shape::Cylinder { radius, height } => radius.min(0.5 * height),
            Shape::Product { factors } => factors
                .iter()
                .map(Factor::collar)
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub(crate) fn lineality(&self, dim: usize) -> usize {
        match self {
            Shape::Ball { .. } | Shape::Ellipsoid { .. } | Shape::Cylinder { .. } => 0,
            Shape::HalfSpace(_) => dim - 1,
            Shape::Polytope { faces, .. } => polytope::lineality(faces, dim),
            Shape::Product { factors } => factors.iter().map(Factor::lineality).sum(),
        }
    }

    pub(crate) fn anchor(&self, dim: usize) -> Vec<f64> {
        match self {
            Shape::Ball { center, .. } | Shape::Ellipsoid { center, .. } => center.clone(),
            Shape::HalfSpace(face) => face.normal.iter().map(|n| n * (face.offset - 1.0)).collect(),
            Shape::Cylinder { height, .. } => {
                let mut a = vec![0.0; dim];
                a[dim - 1] = 0.5 * height;
                a
            }
            Shape::Polytope { anchor, .. } => anchor.clone(),
            Shape::Product { factors } => factors.iter().flat_map(Factor::anchor).collect(),
        }
    }

    pub(crate) fn bounding_box(&self, dim: usize) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Shape::Ball { center, radius } => Some((
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
            Shape::HalfSpace(_) => None,
            Shape::Ellipsoid { center, semi_axes } => Some((
                center.iter().zip(semi_axes).map(|(c, a)| c - a).collect(),
                center.iter().zip(semi_axes).map(|(c, a)| c + a).collect(),
            )),
            Shape::Cylinder { radius, height } => {
                let mut lo = vec![-radius; dim];
                let mut hi = vec![*radius; dim];
                lo[dim - 1] = 0.0;
                hi[dim - 1] = *height;
                Some((lo, hi))
            }
            Shape::Polytope { faces, .. } => {
                if polytope::is_bounded(faces, dim) {
                    polytope::bounding_box(faces, dim)
                } else {
                    None
                }
            }
            Shape::Product { factors } => {
                let mut lo = Vec::with_capacity(dim);
                let mut hi = Vec::with_capacity(dim);
                for f in factors {
                    let (l, h) = f.bbox()?;
                    lo.extend(l);
                    hi.extend(h);
                }
                Some((lo, hi))
            }
        }
    }
}

/// Clearance of `y` inside the slice `{y + s a + t b}` of the region
/// `sum w_i z_i^2 < r2` (`w_i >= 0`). The slice is an ellipse or a strip.
/// Returns `None` on the medial axis of an ellipse, where the nearest-point
/// solver refuses to pick a foot.
fn slice_quadric(y: &[f64], plane: &Plane2, w: &[f64], r2: f64) -> Option<f64> {
    let (mut m11, mut m12, mut m22, mut g1, mut g2, mut c) = (0.0, 0.0, 0.0, 0.0, 0.0, -r2);
    for i in 0..y.len() {
        let (a, b) = (plane.a[i], plane.b[i]);
        m11 += w[i] * a * a;
        m12 += w[i] * a * b;
        m22 += w[i] * b * b;
        g1 += w[i] * y[i] * a;
        g2 += w[i] * y[i] * b;
        c += w[i] * y[i] * y[i];
    }
    // Eigenpairs of [[m11, m12], [m12, m22]], l1 >= l2 >= 0.
    let mean = 0.5 * (m11 + m22);
    let rad = (0.5 * (m11 - m22)).hypot(m12);
    let l1 = mean + rad;
    let l2 = (mean - rad).max(0.0);
    if !(l1 > 0.0) {
        return Some(f64::INFINITY);
    }
    let theta = 0.5 * (2.0 * m12).atan2(m11 - m22);
    let (q1y, q1x) = theta.sin_cos();
    let h1 = g1 * q1x + g2 * q1y;
    let h2 = -g1 * q1y + g2 * q1x;
    if l2 <= 1e-14 * l1 {
        // Strip |u - u0| < half around the eigen-direction q1.
        let rho = h1 * h1 / l1 - c;
        return Some((rho.max(0.0) / l1).sqrt() - (h1 / l1).abs());
    }
    // Ellipse centred at z0 = -M^{-1} g; our point is the origin.
    let rho = h1 * h1 / l1 + h2 * h2 / l2 - c;
    let axes = [(rho / l1).sqrt(), (rho / l2).sqrt()];
    let rel = [h1 / l1, h2 / l2];
    ellipsoid::nearest(&rel, &axes).ok().map(|f| f.distance)
}

fn face_clearance(face: &Face, x: &[f64], plane: &Plane2) -> f64 {
    let pn = norm(&plane.project(&face.normal));
    if pn <= 1e-15 {
        f64::INFINITY
    } else {
        face.slack(x) / pn
    }
}
