use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("progression length k must be at least {min}, got {k}")]
    InvalidK { k: usize, min: usize },

    #[error("candidate {candidate} must exceed the current maximum {max}")]
    CandidateNotAboveMax { candidate: u64, max: u64 },

    #[error("seed contains a {k}-term AP")]
    InvalidSeed { k: usize },

    #[error("sequence is not strictly increasing at position {index}")]
    NotIncreasing { index: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration bound exceeded: {n} > {bound}")]
    EnumerationBound { n: u64, bound: u64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
