use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series has zero constant term and cannot be inverted")]
    NonInvertibleSeries,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("malformed Cartan matrix: {0}")]
    MalformedCartan(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("group too large to enumerate: |W| = {order} exceeds bound {bound}")]
    TooLarge { order: u128, bound: u128 },

    #[error("group elements have not been enumerated")]
    NotEnumerated,

    #[error("orbit exceeds safety bound of {0} elements")]
    OrbitTooLarge(usize),

    #[error("series inconsistency: {0}")]
    SeriesInconsistency(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("invalid candidate set: {0}")]
    InvalidCandidate(String),

    #[error("evaluation point is not a regular vector")]
    NotRegular,

    #[error("tensor is not equivariant under the group")]
    NotEquivariant,

    #[error("operation requires explicit invariants: {0}")]
    NeedsExplicit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
