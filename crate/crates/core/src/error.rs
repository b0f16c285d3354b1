use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a complex: {0}")]
    NotAComplex(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("algebra mismatch")]
    AlgebraMismatch,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("operator is not invertible in degree {0}")]
    NotInvertible(i64),

    #[error("not second order: {0}")]
    NotSecondOrder(String),

    #[error("factorial not invertible: {0}")]
    FactorialNotInvertible(String),

    #[error("jacobi condition fails: {0}")]
    JacobiFailure(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("semantic error at line {line}: {message}")]
    Semantic { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
