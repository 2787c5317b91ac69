use thiserror::Error;

use crate::framework::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid framework: {}", join(.0))]
    InvalidFramework(Vec<Violation>),

    #[error("points have inconsistent dimension: vertex {vertex} has {got} coordinates, expected {expected}")]
    RaggedPoints {
        vertex: usize,
        got: usize,
        expected: usize,
    },

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("invalid pin set: {0}")]
    InvalidPinSet(String),

    #[error("size mismatch in {context}: expected {expected}, got {got}")]
    SizeMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("no sign change of det(R) over the bracket [{t0}, {t1}]")]
    NoSignChange { t0: f64, t1: f64 },

    #[error("generator exhausted its retry budget of {attempts} for seed {seed}")]
    RetryBudgetExhausted { seed: u64, attempts: usize },
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
