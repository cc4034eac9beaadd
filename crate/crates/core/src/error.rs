use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid number {text:?}: {reason}")]
    Number { text: String, reason: String },

    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("unknown point id {0}")]
    UnknownId(usize),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("refusing enumeration over {points} points (guard is {guard})")]
    Guard { points: usize, guard: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
