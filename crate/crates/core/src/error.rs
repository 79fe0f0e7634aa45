use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("covering range {0} must be positive")]
    InvalidDelta(Rational),

    #[error("covering range {delta} outside the admissible interval {interval}")]
    DeltaOutOfRange { delta: Rational, interval: String },

    #[error("not a {delta}-cover: point {witness} is uncovered")]
    NotACover { delta: Rational, witness: String },

    #[error("input is not a forest")]
    NotAForest,

    #[error("algorithm does not apply: {0}")]
    Routing(String),

    #[error("search budget exhausted (best size found: {best})")]
    BudgetExhausted { best: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = CoverError> = std::result::Result<T, E>;
