//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parity is undefined on a mixed element: {0}")]
    MixedParity(String),

    #[error("parity mismatch: {0}")]
    ParityMismatch(String),

    #[error("weight mismatch: expected {expected}, got {got}")]
    WeightMismatch { expected: String, got: String },

    #[error("coefficient extraction failed: {0}")]
    Extraction(String),

    #[error("operator does not fit its context: {0}")]
    Bounds(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a cocycle: delta1 has {0} nonzero pair entries")]
    NotACocycle(usize),

    #[error("inapplicable family parameters: {0}")]
    Inapplicable(String),

    #[error("formula inconsistent at these parameters: {0}")]
    FormulaInconsistent(String),

    #[error("triviality test inconclusive at the current truncation")]
    Inconclusive,

    #[error("internal consistency fault: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
