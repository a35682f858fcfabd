use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("arithmetic mode mismatch: {0}")]
    ModeError(String),
    #[error("invalid Renyi order {0}")]
    InvalidOrder(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("potential is not discrete convex (slope decreases after index {0})")]
    NotConvex(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("polynomial variable mismatch: {0} vs {1}")]
    VarError(char, char),
    #[error("parse error: {0}")]
    Parse(String),
}
