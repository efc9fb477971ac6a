use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected order {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry ({row}, {col}) is {value}, expected -1 or +1")]
    NotASign { row: usize, col: usize, value: i64 },

    #[error("matrix order must be at least 1")]
    EmptyMatrix,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported field order {0}: must be prime or one of 9, 25, 27, 49, 81, 121, 125")]
    UnsupportedPrimePower(u64),

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("I - A is numerically singular (smallest singular value {sigma_min:e})")]
    SingularBlock { sigma_min: f64 },

    #[error("catalog gap at n = {n}: no Hadamard order m >= n with m - n < sqrt(m); nearest orders {nearest:?}")]
    CatalogGap { n: usize, nearest: Vec<usize> },

    #[error("matrix is not orthogonal (defect {defect:e} exceeds {tolerance:e})")]
    NotOrthogonal { defect: f64, tolerance: f64 },

    #[error("Gram entry ({row}, {col}) is {found}, expected {expected}")]
    GramMismatch {
        row: usize,
        col: usize,
        expected: i64,
        found: i64,
    },

    #[error("record rejected: {0}")]
    Rejected(String),

    #[error("registry is empty")]
    EmptyRegistry,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
