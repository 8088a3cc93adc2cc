//! Dense helpers on coordinate slices.
//!
//! Points and vectors are plain `&[f64]` at the API surface; temporaries on
//! hot paths live in [`Buf`], which stays on the stack for `d <= 8`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Buf = SmallVec<[f64; 8]>;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `|y|^2 - r2` with compensated products and summation, accurate to a few
/// ulps of the result even when it is tiny next to `r2`.
pub fn norm2_minus(y: &[f64], r2: f64) -> f64 {
    let mut sum = -r2;
    let mut comp = 0.0;
    let mut add = |t: f64| {
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    };
    for &a in y {
        let p = a * a;
        add(p);
        add(a.mul_add(a, -p));
    }
    sum + comp
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Buf {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Buf {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[inline]
pub fn scale(a: &[f64], s: f64) -> Buf {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
#[inline]
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Buf {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Point on the segment `a + t (b - a)`.
#[inline]
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Buf {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub fn normalized(a: &[f64]) -> Result<Buf> {
    let n = norm(a);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(scale(a, 1.0 / n))
}

pub fn unit(dim: usize, axis: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[axis] = 1.0;
    e
}

pub fn check_dim(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: x.len(),
        });
    }
    Ok(())
}

/// Orthonormal basis of the orthogonal complement of the unit vector `u`.
///
/// The basis depends on `u` only through `u u^T`, so `u` and `-u` yield the
/// same complement frame.
pub fn complement_basis(u: &[f64]) -> Vec<Buf> {
    let d = u.len();
    let mut basis: Vec<Buf> = Vec::with_capacity(d - 1);
    // Seed with the axes least aligned with u.
    let mut axes: Vec<usize> = (0..d).collect();
    axes.sort_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()).then(i.cmp(&j)));
    for &axis in &axes {
        if basis.len() == d - 1 {
            break;
        }
        let mut w: Buf = (0..d).map(|i| if i == axis { 1.0 } else { 0.0 }).collect();
        let c = dot(&w, u);
        for (wi, ui) in w.iter_mut().zip(u) {
            *wi -= c * ui;
        }
        for b in &basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let n = norm(&w);
        if n > 1e-8 {
            basis.push(scale(&w, 1.0 / n));
        }
    }
    basis
}

/// A two-dimensional linear subspace given by an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane2 {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Plane2 {
    /// Orthonormalizes two spanning vectors; fails unless they span a 2-plane.
    pub fn span(u: &[f64], w: &[f64]) -> Result<Self> {
        if u.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                got: w.len(),
            });
        }
        let nu = norm(u);
        if nu < 1e-12 {
            return Err(Error::DegeneratePlane);
        }
        let a = scale(u, 1.0 / nu);
        let c = dot(w, &a);
        let r = axpy(w, -c, &a);
        let nr = norm(&r);
        if nr < 1e-9 * norm(w).max(1e-300) || nr < 1e-12 {
            return Err(Error::DegeneratePlane);
        }
        Ok(Self {
            a: a.to_vec(),
            b: scale(&r, 1.0 / nr).to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Unit direction at angle `theta` in the plane.
    #[inline]
    pub fn direction(&self, theta: f64) -> Buf {
        let (s, c) = theta.sin_cos();
        self.a.iter().zip(&self.b).map(|(x, y)| c * x + s * y).collect()
    }

    /// Orthogonal projection of `v` onto the plane.
    pub fn project(&self, v: &[f64]) -> Buf {
        let ca = dot(v, &self.a);
        let cb = dot(v, &self.b);
        self.a
            .iter()
            .zip(&self.b)
            .map(|(x, y)| ca * x + cb * y)
            .collect()
    }
}

/// Orientation-preserving rigid motion `x -> R x + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rigid {
    dim: usize,
    /// Row-major `d x d` orthogonal matrix.
    rotation: Vec<f64>,
    translation: Vec<f64>,
}

impl Rigid {
    pub fn identity(dim: usize) -> Self {
        let mut rotation = vec![0.0; dim * dim];
        for i in 0..dim {
            rotation[i * dim + i] = 1.0;
        }
        Self {
            dim,
            rotation,
            translation: vec![0.0; dim],
        }
    }

    pub fn new(rotation: Vec<f64>, translation: Vec<f64>) -> Result<Self> {
        let dim = translation.len();
        if rotation.len() != dim * dim {
            return Err(Error::InvalidBody(format!(
                "rotation needs {} entries, got {}",
                dim * dim,
                rotation.len()
            )));
        }
        let m = DMatrix::from_row_slice(dim, dim, &rotation);
        let defect = (&m * m.transpose() - DMatrix::identity(dim, dim)).amax();
        if defect > 1e-9 {
            return Err(Error::InvalidBody(format!(
                "rotation is not orthogonal (defect {defect:e})"
            )));
        }
        Ok(Self {
            dim,
            rotation,
            translation,
        })
    }

    /// Haar-distributed rotation (QR of a Gaussian matrix) and the given translation.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, translation: Vec<f64>) -> Self {
        let dim = translation.len();
        let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..dim {
            if r[(j, j)] < 0.0 {
                for i in 0..dim {
                    q[(i, j)] = -q[(i, j)];
                }
            }
        }
        if q.determinant() < 0.0 {
            for i in 0..dim {
                q[(i, 0)] = -q[(i, 0)];
            }
        }
        let rotation = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| q[(i, j)])
            .collect();
        Self {
            dim,
            rotation,
            translation,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// `R v`
    #[inline]
    pub fn rotate(&self, v: &[f64]) -> Buf {
        let d = self.dim;
        (0..d)
            .map(|i| dot(&self.rotation[i * d..(i + 1) * d], v))
            .collect()
    }

    /// `R^T v`
    #[inline]
    pub fn rotate_inv(&self, v: &[f64]) -> Buf {
        let d = self.dim;
        let mut out: Buf = smallvec::smallvec![0.0; d];
        for i in 0..d {
            let row = &self.rotation[i * d..(i + 1) * d];
            for j in 0..d {
                out[j] += row[j] * v[i];
            }
        }
        out
    }

    #[inline]
    pub fn apply(&self, x: &[f64]) -> Buf {
        let mut y = self.rotate(x);
        for (yi, ti) in y.iter_mut().zip(&self.translation) {
            *yi += ti;
        }
        y
    }

    #[inline]
    pub fn apply_inv(&self, y: &[f64]) -> Buf {
        let shifted = sub(y, &self.translation);
        self.rotate_inv(&shifted)
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Rigid) -> Rigid {
        let d = self.dim;
        let mut rotation = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                rotation[i * d + j] = (0..d)
                    .map(|k| self.rotation[i * d + k] * inner.rotation[k * d + j])
                    .sum();
            }
        }
        Rigid {
            dim: d,
            rotation,
            translation: self.apply(&inner.translation).to_vec(),
        }
    }
}

/// Combinations of `k` indices out of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut state: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let current = state.clone()?;
        let mut next = current.clone();
        let mut i = k;
        loop {
            if i == 0 {
                state = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                state = Some(next);
                break;
            }
        }
        Some(current)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complement_basis_is_orthonormal_and_sign_invariant() {
        let u = normalized(&[0.3, -1.0, 0.4, 2.0]).unwrap();
        let b = complement_basis(&u);
        assert_eq!(b.len(), 3);
        for (i, bi) in b.iter().enumerate() {
            assert!(dot(bi, &u).abs() < 1e-14);
            for (j, bj) in b.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot(bi, bj) - expected).abs() < 1e-14);
            }
        }
        let neg: Buf = u.iter().map(|x| -x).collect();
        let bn = complement_basis(&neg);
        for (x, y) in b.iter().zip(&bn) {
            assert!(dist(x, y) < 1e-14);
        }
    }

    #[test]
    fn random_rigid_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = Rigid::random(&mut rng, vec![1.0, -2.0, 0.5]);
        let x = [0.2, 0.7, -0.1];
        let back = r.apply_inv(&r.apply(&x));
        assert!(dist(&back, &x) < 1e-14);
        assert!(Rigid::new(r.rotation.clone(), r.translation.clone()).is_ok());
        let id = r.compose(&Rigid::identity(3));
        assert!(dist(&id.apply(&x), &r.apply(&x)) < 1e-14);
    }

    #[test]
    fn norm2_minus_keeps_tiny_results() {
        let e = 2f64.powi(-30);
        let x = [0.5, 0.5, 0.5, 0.5 - e];
        // |x|^2 - 1 = -e + e^2 exactly; the e^2 term needs 62 bits.
        let exact = -e + e * e;
        let naive = dot(&x, &x) - 1.0;
        let good = norm2_minus(&x, 1.0);
        assert_eq!(good, exact);
        assert!((naive - exact).abs() > (good - exact).abs());
    }

    #[test]
    fn plane_span_rejects_parallel_vectors() {
        assert_eq!(
            Plane2::span(&[1.0, 0.0, 0.0], &[2.0, 0.0, 0.0]),
            Err(Error::DegeneratePlane)
        );
    }

    #[test]
    fn combinations_enumerate_all_subsets() {
        let all: Vec<_> = combinations(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
    }
}
