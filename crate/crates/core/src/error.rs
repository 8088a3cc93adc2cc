use thiserror::Error;

/// Errors raised by body oracles, metric evaluators and distance routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is not in the interior of the body")]
    NotInterior,

    #[error("point is not on the boundary of the body (signed distance {signed_distance:e})")]
    NotOnBoundary { signed_distance: f64 },

    #[error("direction vector must be nonzero")]
    ZeroVector,

    #[error("nearest boundary point is not unique")]
    AmbiguousProjection,

    #[error("boundary distance {delta} is outside the collar of width {epsilon}")]
    OutsideCollar { delta: f64, epsilon: f64 },

    #[error("plane is not two-dimensional")]
    DegeneratePlane,

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("no closed-form minimal metric for body kind `{0}`")]
    NoClosedForm(&'static str),

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("segment leaves the body")]
    SegmentExits,

    #[error("boundary mesh is disconnected")]
    DisconnectedMesh,

    #[error("triangle inequality violated by {excess:e}")]
    TriangleInequality { excess: f64 },

    #[error("aperture condition fails: planar clearance {clearance:e} along the ray")]
    ApertureFails { clearance: f64 },

    #[error("triangle sides do not share endpoints (gap {gap:e})")]
    EndpointMismatch { gap: f64 },

    #[error("empty sample set")]
    EmptySamples,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
