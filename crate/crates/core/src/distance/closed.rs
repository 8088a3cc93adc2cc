//! Closed-form distances along the chord through two points.

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{check_dim, dist, dot, sub};

/// Chord through `x` and `y`: distance behind `x`, distance ahead of `x`
/// (towards `y`), and `|x - y|`.
struct LineExits {
    behind: f64,
    ahead: f64,
    gap: f64,
}

fn line_exits(body: &ConvexBody, x: &[f64], y: &[f64]) -> Result<Option<LineExits>> {
    check_dim(body.dim(), x)?;
    check_dim(body.dim(), y)?;
    if !body.is_interior(x) || !body.is_interior(y) {
        return Err(Error::NotInterior);
    }
    let gap = dist(x, y);
    if gap == 0.0 {
        return Ok(None);
    }
    let u: Vec<f64> = sub(y, x).iter().map(|c| c / gap).collect();
    let (behind, ahead) = body.chord_unchecked(x, &u);
    // y is interior, so the exit lies strictly beyond it.
    let ahead = ahead.max(gap * (1.0 + f64::EPSILON));
    Ok(Some(LineExits { behind, ahead, gap }))
}

/// Hilbert distance `(1/2) log [a, x, y, b]`; infinite endpoints contribute ratio 1.
pub fn hilbert_distance(body: &ConvexBody, x: &[f64], y: &[f64]) -> Result<f64> {
    let Some(e) = line_exits(body, x, y)? else {
        return Ok(0.0);
    };
    Ok(0.5 * ((e.gap / e.behind).ln_1p() - (-e.gap / e.ahead).ln_1p()))
}

/// Hilbert distance of the unit ball (Klein model), in closed form.
pub fn klein_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(x.len(), y)?;
    let (x2, y2, xy) = (dot(x, x), dot(y, y), dot(x, y));
    if x2 >= 1.0 || y2 >= 1.0 {
        return Err(Error::NotInterior);
    }
    let d = crate::linalg::dist(x, y);
    let num = (d * d - x2 * y2 + xy * xy).max(0.0).sqrt();
    Ok((num / (1.0 - xy)).atanh())
}

/// Lower bound for the minimal distance: the larger of the two
/// single-endpoint half-space comparisons along the chord through `x`, `y`.
/// It dominates half the Hilbert distance, which is their average.
pub fn minimal_distance_lower(body: &ConvexBody, x: &[f64], y: &[f64]) -> Result<f64> {
    let Some(e) = line_exits(body, x, y)? else {
        return Ok(0.0);
    };
    let from_behind = 0.5 * (e.gap / e.behind).ln_1p();
    let from_ahead = -0.5 * (-e.gap / e.ahead).ln_1p();
    Ok(from_behind.max(from_ahead))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::Factor;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hilbert_examples() {
        let b = ConvexBody::unit_ball(3);
        assert_abs_diff_eq!(
            hilbert_distance(&b, &[0.0; 3], &[0.5, 0.0, 0.0]).unwrap(),
            0.5f64.atanh(),
            epsilon = 1e-15
        );
        assert_eq!(hilbert_distance(&b, &[0.1, 0.2, 0.3], &[0.1, 0.2, 0.3]).unwrap(), 0.0);
        let rxb = ConvexBody::product(vec![Factor::Line, Factor::Ball { dim: 2, radius: 1.0 }]).unwrap();
        assert_eq!(hilbert_distance(&rxb, &[-3.0, 0.1, 0.2], &[5.0, 0.1, 0.2]).unwrap(), 0.0);
    }

    #[test]
    fn klein_formula_matches_cross_ratio() {
        let b = ConvexBody::unit_ball(3);
        let pairs = [
            ([0.1, -0.3, 0.5], [-0.6, 0.2, 0.1]),
            ([0.9, 0.0, 0.1], [0.0, -0.95, 0.0]),
            ([0.0, 0.0, 0.0], [0.0, 0.0, 0.999]),
        ];
        for (x, y) in pairs {
            let k = klein_distance(&x, &y).unwrap();
            let h = hilbert_distance(&b, &x, &y).unwrap();
            assert!((k - h).abs() < 1e-12 * (1.0 + k), "{k} vs {h}");
        }
    }

    #[test]
    fn lower_examples() {
        let b = ConvexBody::unit_ball(3);
        assert_abs_diff_eq!(
            minimal_distance_lower(&b, &[0.0; 3], &[0.5, 0.0, 0.0]).unwrap(),
            0.5 * 2f64.ln(),
            epsilon = 1e-15
        );
        let h = ConvexBody::upper_halfspace(3);
        let e2 = std::f64::consts::E.powi(2);
        assert_abs_diff_eq!(
            minimal_distance_lower(&h, &[1.0, 2.0, 0.0], &[e2, 2.0, 0.0]).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_eq!(minimal_distance_lower(&b, &[0.2; 3], &[0.2; 3]).unwrap(), 0.0);
    }
}
