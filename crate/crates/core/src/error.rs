use thiserror::Error;

/// Errors raised by the algebraic routines and the definition-file loader.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid algebra definition: {0}")]
    InvalidAlgebra(String),

    #[error("bracket [{left}, {right}] violates the grading: component on `{target}` lies outside the expected layer")]
    GradingViolation {
        left: String,
        right: String,
        target: String,
    },

    #[error("algebra is not nilpotent: lower central series stabilizes at dimension {stable_dim}")]
    NotNilpotent { stable_dim: usize },

    #[error("algebra has nilpotency degree {degree}, operation requires at most {max}")]
    NilpotencyDegree { degree: usize, max: usize },

    #[error("dilation parameter must be nonzero")]
    ZeroDilation,

    #[error("subspace is not horizontal (row {row} leaves the first layer)")]
    NotHorizontal { row: usize },

    #[error("subspace is not {0}")]
    Uncertified(&'static str),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("linear system has no solution")]
    Inconsistent,

    #[error("vectors do not form a basis: {0}")]
    SingularBasis(String),

    #[error("form is zero")]
    ZeroForm,

    #[error("ambient mismatch: forms live on spaces of dimension {left} and {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
