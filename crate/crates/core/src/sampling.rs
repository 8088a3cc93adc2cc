//! Deterministic point samplers: Halton interior points, collar shells and
//! boundary-biased draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::ConvexBody;
use crate::linalg::{axpy, dist};

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MAX_ATTEMPTS: usize = 10_000;

/// Van der Corput radical inverse of `i` in `base`.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Point `i` of the Halton sequence in `[0,1)^dim`.
pub fn halton(i: u64, dim: usize) -> Vec<f64> {
    (0..dim).map(|k| radical_inverse(i, PRIMES[k % PRIMES.len()])).collect()
}

/// Independent generator for item `index` of a stream keyed by `seed`.
pub fn item_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Axis-aligned sampling window.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Window {
    /// The bounding box of a bounded body, else a cube around `points`.
    pub fn for_body(body: &ConvexBody, points: &[Vec<f64>]) -> Self {
        if let Some((lo, hi)) = body.bounding_box() {
            return Self { lo, hi };
        }
        let d = body.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for p in points {
            for i in 0..d {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        if points.is_empty() {
            let a = body.anchor();
            lo.clone_from(&a);
            hi = a;
        }
        let spread = dist(&lo, &hi).max(1.0);
        let half = 1.5 * spread;
        let center: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect();
        Self {
            lo: center.iter().map(|c| c - half).collect(),
            hi: center.iter().map(|c| c + half).collect(),
        }
    }

    pub fn at(&self, unit: &[f64]) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(unit)
            .map(|((l, h), u)| l + (h - l) * u)
            .collect()
    }

    pub fn uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let u: Vec<f64> = (0..self.lo.len()).map(|_| rng.random::<f64>()).collect();
        self.at(&u)
    }
}

/// Interior point from the Halton sequence at `index`, with randomly
/// rotated retries when the lattice point falls outside the body.
pub fn halton_interior<R: Rng + ?Sized>(
    body: &ConvexBody,
    window: &Window,
    index: u64,
    rng: &mut R,
) -> Option<Vec<f64>> {
    let d = body.dim();
    let base = halton(index + 1, d);
    let x = window.at(&base);
    if body.is_interior(&x) {
        return Some(x);
    }
    for _ in 0..MAX_ATTEMPTS {
        let shifted: Vec<f64> = base.iter().map(|b| (b + rng.random::<f64>()).fract()).collect();
        let x = window.at(&shifted);
        if body.is_interior(&x) {
            return Some(x);
        }
    }
    None
}

pub fn uniform_interior<R: Rng + ?Sized>(
    body: &ConvexBody,
    window: &Window,
    rng: &mut R,
) -> Option<Vec<f64>> {
    (0..MAX_ATTEMPTS)
        .map(|_| window.uniform(rng))
        .find(|x| body.is_interior(x))
}

/// Point at boundary distance `delta` below the foot of a random interior
/// point: `pi(z) - delta n(pi(z))`.
pub fn collar_point<R: Rng + ?Sized>(
    body: &ConvexBody,
    window: &Window,
    delta: f64,
    rng: &mut R,
) -> Option<Vec<f64>> {
    for _ in 0..MAX_ATTEMPTS {
        let z = uniform_interior(body, window, rng)?;
        let Ok(foot) = body.nearest_boundary(&z) else {
            continue;
        };
        let x = axpy(&foot.point, -delta, &foot.normal).to_vec();
        if body.is_interior(&x) {
            return Some(x);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        let v: Vec<f64> = (1..5).map(|i| radical_inverse(i, 2)).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
    }

    #[test]
    fn collar_points_sit_at_the_requested_depth() {
        let b = ConvexBody::unit_ball(3);
        let w = Window::for_body(&b, &[]);
        let mut rng = item_rng(1, 0);
        for _ in 0..20 {
            let x = collar_point(&b, &w, 0.01, &mut rng).unwrap();
            assert!((b.boundary_distance(&x).unwrap() - 0.01).abs() < 1e-12);
        }
    }

    #[test]
    fn item_streams_are_reproducible_and_distinct() {
        let a: f64 = item_rng(9, 3).random();
        let b: f64 = item_rng(9, 3).random();
        let c: f64 = item_rng(9, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
