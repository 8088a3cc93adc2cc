//! Nearest point on an axis-aligned ellipsoid `sum (y_i / a_i)^2 = 1`.
//!
//! The foot point is `x_i = a_i^2 y_i / (a_i^2 + t)` where `t` is the root of
//! `F(t) = sum (a_i y_i / (a_i^2 + t))^2 - 1`, which is strictly decreasing on
//! `t > -a_min^2`. Interior points have `t` in `(-a_min^2, 0)`; exterior
//! points have `t > 0`.

use crate::error::{Error, Result};

const TIE_TOL: f64 = 1e-9;

pub(crate) struct Foot {
    pub point: Vec<f64>,
    pub distance: f64,
}

fn level(y: &[f64], a: &[f64], t: f64) -> f64 {
    y.iter()
        .zip(a)
        .map(|(yi, ai)| {
            let r = ai * yi / (ai * ai + t);
            r * r
        })
        .sum::<f64>()
        - 1.0
}

fn slope(y: &[f64], a: &[f64], t: f64) -> f64 {
    y.iter()
        .zip(a)
        .map(|(yi, ai)| {
            let q = ai * ai + t;
            let r = ai * yi;
            -2.0 * r * r / (q * q * q)
        })
        .sum()
}

/// Root of `F` in `(lo, hi)`, given `F(lo) > 0 > F(hi)`: Newton steps,
/// falling back to bisection whenever a step leaves the bracket.
fn bisect(y: &[f64], a: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = level(y, a, t);
        if f == 0.0 {
            return t;
        }
        if f > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let mut next = t - f / slope(y, a, t);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) || next == t {
            return next;
        }
        t = next;
    }
    t
}

fn foot_from_root(y: &[f64], a: &[f64], t: f64) -> Vec<f64> {
    y.iter()
        .zip(a)
        .map(|(yi, ai)| ai * ai * yi / (ai * ai + t))
        .collect()
}

/// Nearest boundary point to `y` (ellipsoid-centered local coordinates).
///
/// For interior points on the medial set (two or more nearest points) this
/// returns [`Error::AmbiguousProjection`].
pub(crate) fn nearest(y: &[f64], a: &[f64]) -> Result<Foot> {
    let f0 = level(y, a, 0.0);
    let a_min = a.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = a.iter().copied().fold(0.0, f64::max);
    if f0 == 0.0 {
        return Ok(Foot {
            point: y.to_vec(),
            distance: 0.0,
        });
    }
    if f0 > 0.0 {
        let hi = y
            .iter()
            .zip(a)
            .map(|(yi, ai)| (ai * yi) * (ai * yi))
            .sum::<f64>()
            .sqrt();
        let t = bisect(y, a, 0.0, hi.max(f64::MIN_POSITIVE));
        let point = foot_from_root(y, a, t);
        let distance = crate::linalg::dist(&point, y);
        return Ok(Foot { point, distance });
    }

    // Interior. Split the coordinates on the smallest semi-axis.
    let is_min = |ai: f64| (ai - a_min).abs() <= 1e-12 * a_min;
    let min_axes_mass: f64 = y
        .iter()
        .zip(a)
        .filter(|(_, ai)| is_min(**ai))
        .map(|(yi, _)| yi * yi)
        .sum::<f64>()
        .sqrt();
    let lo = -a_min * a_min;
    if min_axes_mass <= TIE_TOL * scale {
        // Limit of F at t -> -a_min^2 with the small-axis coordinates removed.
        let rest: f64 = y
            .iter()
            .zip(a)
            .filter(|(_, ai)| !is_min(**ai))
            .map(|(yi, ai)| {
                let r = ai * yi / (ai * ai - a_min * a_min);
                r * r
            })
            .sum::<f64>()
            - 1.0;
        if rest < 0.0 {
            return Err(Error::AmbiguousProjection);
        }
    }
    let t = if min_axes_mass == 0.0 {
        // No singular term: the root exists because rest >= 0.
        let reduced: Vec<f64> = y
            .iter()
            .zip(a)
            .map(|(yi, ai)| if is_min(*ai) { 0.0 } else { *yi })
            .collect();
        bisect(&reduced, a, lo, 0.0)
    } else {
        bisect(y, a, lo, 0.0)
    };
    let point = foot_from_root(y, a, t);
    let distance = crate::linalg::dist(&point, y);
    Ok(Foot { point, distance })
}

/// Outward unit normal at a boundary point.
pub(crate) fn normal(x: &[f64], a: &[f64]) -> Vec<f64> {
    let g: Vec<f64> = x.iter().zip(a).map(|(xi, ai)| xi / (ai * ai)).collect();
    let n = crate::linalg::norm(&g);
    g.iter().map(|gi| gi / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force nearest point over a fine parametrization of the ellipse.
    fn brute_force_2d(y: &[f64], a: &[f64]) -> f64 {
        let n = 200_000;
        (0..n)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / n as f64;
                let p = [a[0] * th.cos(), a[1] * th.sin()];
                ((p[0] - y[0]).powi(2) + (p[1] - y[1]).powi(2)).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn matches_brute_force_inside_and_outside() {
        let a = [2.0, 1.0];
        for y in [[0.5, 0.3], [1.5, -0.2], [-0.1, 0.9], [2.5, 1.0], [0.0, 0.5], [3.0, 0.0]] {
            let foot = nearest(&y, &a).unwrap();
            let bf = brute_force_2d(&y, &a);
            assert!((foot.distance - bf).abs() < 1e-6, "{y:?}: {} vs {bf}", foot.distance);
            let on = (foot.point[0] / a[0]).powi(2) + (foot.point[1] / a[1]).powi(2);
            assert!((on - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn medial_axis_is_ambiguous() {
        // Points on the major axis close to the center have two feet.
        assert_eq!(
            nearest(&[0.5, 0.0], &[2.0, 1.0]).err(),
            Some(Error::AmbiguousProjection)
        );
        // Beyond the center of curvature the foot is the vertex.
        let foot = nearest(&[1.8, 0.0], &[2.0, 1.0]).unwrap();
        assert!((foot.distance - 0.2).abs() < 1e-12);
    }
}
