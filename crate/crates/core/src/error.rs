//! Crate-level error type.

use alloc::string::String;
use core::fmt;

use crate::scalar::ScalarError;

/// Errors surfaced by design construction, decomposition, and verification.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Underlying scalar arithmetic failed.
    Scalar(ScalarError),
    /// Inputs with inconsistent dimensions (vector lengths, matrix sides).
    DimensionMismatch { expected: usize, found: usize },
    /// A parameter outside the supported range, with a short reason.
    InvalidParameter(String),
    /// Orbit generation exceeded the configured size bound.
    OrbitTooLarge { bound: usize },
    /// A construction requires a verified design but verification failed.
    DesignNotVerified,
    /// A construction requires a verified decomposition but verification failed.
    DecompositionNotVerified,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Scalar(e) => write!(f, "scalar arithmetic: {e}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidParameter(reason) => write!(f, "invalid parameter: {reason}"),
            Error::OrbitTooLarge { bound } => {
                write!(f, "orbit exceeds the size bound of {bound} vectors")
            }
            Error::DesignNotVerified => {
                write!(f, "design does not satisfy the averaging identities")
            }
            Error::DecompositionNotVerified => {
                write!(f, "decomposition does not reproduce its target tensor")
            }
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Scalar(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ScalarError> for Error {
    fn from(e: ScalarError) -> Self {
        Error::Scalar(e)
    }
}
