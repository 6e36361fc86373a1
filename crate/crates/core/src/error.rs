use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("invalid speeds: {0}")]
    InvalidSpeeds(String),
    #[error("invalid hyperplane normal: {0}")]
    InvalidNormal(String),
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("subgroup has {order} elements, above the limit of {limit}")]
    OrderLimit { order: String, limit: usize },
    #[error("the set reaches the center; no deep witness exists")]
    CenterReached,
    #[error("basis vectors are linearly dependent")]
    DegenerateBasis,
    #[error("plane is not proper: coordinate {0} vanishes on both generators")]
    NotProper(usize),
    #[error("vector does not lie in the span of the plane")]
    NotContained,
    #[error("offset budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("table mismatch: {0}")]
    TableMismatch(String),
    #[error("no outer-spectrum facts known for n = {n}, target {target}")]
    MissingOuterSpectrum { n: usize, target: Rational },
    #[error("cannot parse {0:?} as a rational")]
    ParseRational(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed file: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
