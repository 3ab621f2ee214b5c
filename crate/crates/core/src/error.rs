use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("continued fraction undefined: zero denominator at position {0}")]
    UndefinedContinuedFraction(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("twist mismatch: expected {expected}, found {found}")]
    TwistMismatch {
        expected: Box<Rational>,
        found: Box<Rational>,
    },

    #[error("index ({row}, {col}) out of range for dimension {dim}")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },
}

impl Error {
    /// Broad class used for process exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::DivisionByZero | Error::UndefinedContinuedFraction(_) | Error::Domain(_) => {
                ErrorKind::Domain
            }
            Error::Precondition(_)
            | Error::TwistMismatch { .. }
            | Error::IndexOutOfRange { .. } => ErrorKind::Precondition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Domain,
    Precondition,
}

pub type Result<T> = std::result::Result<T, Error>;
