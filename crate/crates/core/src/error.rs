use thiserror::Error;

use crate::asymptotic::ReductionCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be at least 1, got {0}")]
    InvalidModulus(i64),

    #[error("dimension must be at least 1")]
    InvalidDimension,

    #[error("{a} is not a unit modulo {n}")]
    NotAUnit { a: u64, n: u64 },

    #[error("dimension {d} exceeds the configured bound {max}")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("job needs {count} evaluations, budget is {budget}")]
    BudgetExceeded { count: u64, budget: u64 },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("row reduction stalled: no unit pivot in the remaining {remaining_rows} rows")]
    NoUnitPivot { remaining_rows: usize, partial: Box<ReductionCertificate> },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("image encoding failed: {0}")]
    Image(#[from] image::ImageError),
}

impl Error {
    /// Short machine-readable tag, used by the CLI's JSON error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "invalid_modulus",
            Error::InvalidDimension => "invalid_dimension",
            Error::NotAUnit { .. } => "not_a_unit",
            Error::DimensionTooLarge { .. } => "dimension_too_large",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Overflow(_) => "overflow",
            Error::HypothesisFailed(_) => "hypothesis_failed",
            Error::NoUnitPivot { .. } => "no_unit_pivot",
            Error::Invalid(_) => "invalid_input",
            Error::Io(_) => "io_failure",
            Error::Json(_) => "json_failure",
            Error::Image(_) => "io_failure",
        }
    }
}
