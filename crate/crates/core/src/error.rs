use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("precision too low: {0} digits requested, at least 15 required")]
    PrecisionTooLow(u32),
    #[error("pole: {0}")]
    Pole(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("series budget exhausted after {terms} terms (last term {last:e})")]
    BudgetExhausted { terms: usize, last: f64 },
    #[error("strategies disagree: {0}")]
    Disagreement(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
