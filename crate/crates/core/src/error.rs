use thiserror::Error;

use crate::algebra::ValidationReport;
use crate::measure::AdditivityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} out of range for a carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("conflicting sums for ({a}, {b}): {first} and {second}")]
    ConflictingSum {
        a: String,
        b: String,
        first: String,
        second: String,
    },

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("degenerate algebra: zero and unit coincide")]
    Degenerate,

    #[error("carrier size {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("effect algebra axioms violated: {0}")]
    Axioms(ValidationReport),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("measure is not additive: {0}")]
    NotAdditive(AdditivityReport),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid set family: {0}")]
    InvalidFamily(String),

    #[error("prime {0} lies beyond the range where its index can be computed")]
    PrimeIndexUnavailable(u64),

    #[error("cannot factor {0}: no small prime factor and too large for primality testing")]
    FactorizationOutOfRange(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
