//! Intrinsic distances: curve lengths, closed-form chord distances, roadmap
//! upper bounds, the boundary distance and the filling distance.

mod closed;
mod graph;
mod mesh;
mod polyline;

pub use closed::{hilbert_distance, klein_distance, minimal_distance_lower};
pub use graph::{geodesic_graph_distance, DistanceReport, GraphConfig, SampleGraph};
pub use mesh::{boundary_intrinsic_distance, filling_distance, filling_report, icosphere, BoundaryMesh};
pub use polyline::{curve_length, segment_length, Polyline};
