use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} outside supported range 1..={max}", max = crate::gf2::MAX_DIM)]
    Dimension(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index {0} out of range for n = {1}")]
    Index(usize, usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration cap exceeded: n = {0} (max {1})")]
    Cap(usize, usize),
    #[error("no generating function: {0}")]
    NotGenerating(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
