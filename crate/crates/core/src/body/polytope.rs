//! H-representation helpers: boundedness, lineality and vertex extents.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{combinations, dot, norm, Buf};

/// Open half-space `<normal, x> < offset` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Face {
    /// Normalizes `normal` and rescales `offset` accordingly.
    pub fn new(normal: &[f64], offset: f64) -> Option<Self> {
        let n = norm(normal);
        if n == 0.0 || !n.is_finite() || !offset.is_finite() {
            return None;
        }
        Some(Self {
            normal: normal.iter().map(|c| c / n).collect(),
            offset: offset / n,
        })
    }

    #[inline]
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

fn normal_matrix(faces: &[Face], rows: &[usize], dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), dim, |i, j| faces[rows[i]].normal[j])
}

pub(crate) fn rank(faces: &[Face], dim: usize) -> usize {
    let rows: Vec<usize> = (0..faces.len()).collect();
    if rows.is_empty() {
        return 0;
    }
    normal_matrix(faces, &rows, dim).rank(1e-10)
}

/// Dimension of the lineality space `{u : <n_i, u> = 0 for all i}`.
pub(crate) fn lineality(faces: &[Face], dim: usize) -> usize {
    dim - rank(faces, dim)
}

/// Unit vector orthogonal to all rows, if the rows have rank `dim - 1`.
fn null_direction(faces: &[Face], rows: &[usize], dim: usize) -> Option<Buf> {
    let mut basis: Vec<Buf> = Vec::new();
    for &r in rows {
        let mut w: Buf = faces[r].normal.iter().copied().collect();
        for b in &basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let n = norm(&w);
        if n < 1e-10 {
            return None;
        }
        basis.push(w.iter().map(|c| c / n).collect());
    }
    for axis in 0..dim {
        let mut w: Buf = (0..dim).map(|i| if i == axis { 1.0 } else { 0.0 }).collect();
        for b in &basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let n = norm(&w);
        if n > 1e-6 {
            return Some(w.iter().map(|c| c / n).collect());
        }
    }
    None
}

/// True iff the recession cone `{u : <n_i, u> <= 0}` is `{0}`.
///
/// A pointed nontrivial cone has an extreme ray on `dim - 1` independent
/// tight constraints, so enumerating those subsets is exhaustive.
pub(crate) fn is_bounded(faces: &[Face], dim: usize) -> bool {
    if rank(faces, dim) < dim {
        return false;
    }
    let tol = 1e-12;
    for rows in combinations(faces.len(), dim - 1) {
        let Some(u) = null_direction(faces, &rows, dim) else {
            continue;
        };
        for sign in [1.0, -1.0] {
            if faces.iter().all(|f| sign * dot(&f.normal, &u) <= tol) {
                return false;
            }
        }
    }
    true
}

/// Axis-aligned bounding box from the vertex set of a bounded polytope.
pub(crate) fn bounding_box(faces: &[Face], dim: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    let mut found = false;
    for rows in combinations(faces.len(), dim) {
        let a = normal_matrix(faces, &rows, dim);
        let b = DVector::from_iterator(dim, rows.iter().map(|&r| faces[r].offset));
        let Some(x) = a.lu().solve(&b) else {
            continue;
        };
        if !x.iter().all(|c| c.is_finite()) {
            continue;
        }
        let scale = 1.0 + x.amax();
        if faces
            .iter()
            .all(|f| dot(&f.normal, x.as_slice()) <= f.offset + 1e-9 * scale)
        {
            found = true;
            for i in 0..dim {
                lo[i] = lo[i].min(x[i]);
                hi[i] = hi[i].max(x[i]);
            }
        }
    }
    found.then_some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(dim: usize) -> Vec<Face> {
        (0..dim)
            .flat_map(|i| {
                let mut e = vec![0.0; dim];
                e[i] = 1.0;
                let mut m = e.clone();
                m[i] = -1.0;
                [Face::new(&e, 1.0).unwrap(), Face::new(&m, 1.0).unwrap()]
            })
            .collect()
    }

    #[test]
    fn cube_is_bounded_with_unit_box() {
        let faces = cube(3);
        assert!(is_bounded(&faces, 3));
        let (lo, hi) = bounding_box(&faces, 3).unwrap();
        assert_eq!(lo, vec![-1.0; 3]);
        assert_eq!(hi, vec![1.0; 3]);
        assert_eq!(lineality(&faces, 3), 0);
    }

    #[test]
    fn dropping_a_face_makes_it_unbounded() {
        let mut faces = cube(3);
        faces.remove(0);
        assert!(!is_bounded(&faces, 3));
        // A slab has a 2-dimensional lineality space.
        let slab = vec![
            Face::new(&[0.0, 0.0, 1.0], 1.0).unwrap(),
            Face::new(&[0.0, 0.0, -1.0], 1.0).unwrap(),
        ];
        assert_eq!(lineality(&slab, 3), 2);
    }
}
