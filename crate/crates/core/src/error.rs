//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point has non-positive depth z = {0} mm; it lies behind or on the camera plane")]
    NonPositiveDepth(f64),

    #[error("cannot normalize a zero-length vector")]
    ZeroVector,

    #[error("normal equations are rank-deficient (collinear or coincident correspondences)")]
    DegenerateConfiguration,

    #[error("need at least {needed} correspondences, got {got}")]
    InsufficientCorrespondences { needed: usize, got: usize },

    #[error("degenerate annotation: {0}")]
    DegenerateAnnotation(String),

    #[error("{stage} diverged: error grew on 10 consecutive damped steps")]
    Divergence { stage: &'static str },

    #[error("camera ray does not intersect the vitreous sphere")]
    RayMissesSphere,

    #[error("surface point is back-facing")]
    BackFacing,

    #[error("no light estimates to merge")]
    EmptyEstimate,

    #[error("half-way vector is undefined: light and view directions are antipodal")]
    DegenerateHalfway,

    #[error("{what} = {value} is outside the valid domain")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("no triangle rasterizes inside the image bounds")]
    EmptyProjection,

    #[error("normal map has no covered pixels")]
    EmptyNormalMap,

    #[error("specular map is identically zero; relative threshold is undefined")]
    AllZeroMap,

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: u32,
        left_height: u32,
        right_width: u32,
        right_height: u32,
    },

    #[error("both masks are empty; the comparison is inconclusive")]
    BothEmpty,

    #[error("point lists have mismatched lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("points are collinear; no triangulation exists")]
    Collinear,

    #[error("duplicate point at ({u}, {v})")]
    DuplicatePoints { u: f64, v: f64 },

    #[error("source and destination meshes do not share topology")]
    TopologyMismatch,

    #[error("destination triangle {index} is degenerate (area < 1e-9 px^2)")]
    DegenerateTriangle { index: usize },

    #[error("the mirror point for this light is back-facing; no highlight is visible")]
    NoVisibleHighlight,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
