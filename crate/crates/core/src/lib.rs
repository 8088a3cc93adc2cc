//! Minimal-metric, Hilbert-metric and Gromov-hyperbolicity computations on
//! convex bodies in `R^d`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod body;
pub mod distance;
mod error;
pub mod gromov;
pub mod linalg;
pub mod metric;
pub mod sampling;

pub use body::{BodyKind, BoundaryPoint, CollarDecomposition, ConvexBody, FlatPatch, Region};
pub use error::{Error, Result};
pub use metric::{ball_minimal, halfspace_minimal, Finsler, MetricEvaluator, MetricTag, PlaneSearch};
