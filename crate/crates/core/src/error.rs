use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("eigenvalue pool incomplete on slice {slice}: {missing} dimension(s) unaccounted for")]
    IncompleteEigenPool { slice: String, missing: usize },
    #[error("integer overflow in {0}")]
    Overflow(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
