use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative argument {0} where a non-negative integer is required")]
    NegativeArgument(i64),
    #[error("mode index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("mode count mismatch: {0} vs {1}")]
    ModeMismatch(usize, usize),
    #[error("parse error at token {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("non-unitary deformation parameter: {0}")]
    NonUnitary(String),
    #[error("division is not exact: {0}")]
    InexactDivision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
