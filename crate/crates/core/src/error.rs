use thiserror::Error;

/// Errors raised by the computational core.
///
/// Variants are grouped by who is at fault: malformed input data
/// (`Schema`, `Dimension`, `FieldMismatch`), violated mathematical
/// preconditions (`Precondition`), and searches that could not reach a
/// verdict (`Inconclusive`).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("malformed input: {0}")]
    Schema(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! precondition {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Precondition(format!($($arg)+)));
        }
    };
}

macro_rules! ensure_dims {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Dimension(format!($($arg)+)));
        }
    };
}

pub(crate) use ensure_dims;
pub(crate) use precondition;
