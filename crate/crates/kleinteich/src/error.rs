use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("determinant is numerically zero")]
    ZeroDeterminant,
    #[error("map is not parabolic")]
    NotParabolic,
    #[error("degenerate cross ratio (denominator vanishes)")]
    DegenerateCrossRatio,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("parameter outside admissible domain: {0}")]
    OutOfDomain(String),
    #[error("family validation failed: {0}")]
    ValidationFailed(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("constraint system unsatisfiable")]
    Unsatisfiable,
    #[error("signature is not non-orientable")]
    NotNonorientable,
    #[error("value out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
