use thiserror::Error;

/// Errors raised by the ring, ideal and decomposition machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("element is not an n-th power")]
    NotAnNthPower,
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("too large: {what} = {size} exceeds cap {cap}")]
    TooLarge { what: String, size: u128, cap: u128 },
    #[error("classification failure: {0}")]
    ClassificationFailure(String),
    /// An identity that must hold by construction failed to verify.
    #[error("paradox: {0}")]
    Paradox(String),
    #[error("parse error at position {position} near `{token}`: {message}")]
    Parse {
        token: String,
        position: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::UnsupportedParameter(msg.into()))
}
