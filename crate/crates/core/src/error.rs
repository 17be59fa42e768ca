use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero while evaluating {0}")]
    ZeroDenominator(String),

    #[error("uncancelled pole in {0}")]
    UncancelledPole(String),

    #[error("rational function has a pole at z = {0}")]
    PoleAtPoint(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(&'static str),

    #[error("degree {degree} exceeds the configured maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("Gram matrix below {0} is singular at this (q, t); pick another point")]
    SingularGram(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("context rejected: {0}")]
    InvalidContext(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
