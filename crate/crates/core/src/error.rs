//! Crate-wide error with the process exit code it maps to.

use thiserror::Error;

use crate::egk::EgkError;
use crate::exact::ExactError;
use crate::localfield::LocalFieldError;
use crate::oracle::OracleError;
use crate::quadform::QuadFormError;
use crate::siegel::SiegelError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("verification mismatch: {0}")]
    Mismatch(String),
    #[error("{0}")]
    ResourceLimit(String),
}

impl Error {
    /// 2 for invalid input, 3 for a failed check, 4 for an exceeded cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 2,
            Error::Mismatch(_) => 3,
            Error::ResourceLimit(_) => 4,
        }
    }
}

macro_rules! validation_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Error {
            fn from(e: $t) -> Self {
                Error::Validation(e.to_string())
            }
        }
    )*};
}

validation_from!(EgkError, ExactError, LocalFieldError, QuadFormError);

impl From<SiegelError> for Error {
    fn from(e: SiegelError) -> Self {
        match e {
            SiegelError::FunctionalEquation(_) => Error::Mismatch(e.to_string()),
            _ => Error::Validation(e.to_string()),
        }
    }
}

impl From<OracleError> for Error {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::ResourceLimit(_) => Error::ResourceLimit(e.to_string()),
            OracleError::Unstable { .. }
            | OracleError::NonIntegral(_)
            | OracleError::BadCharacterSum(_) => Error::Mismatch(e.to_string()),
            OracleError::Siegel(s) => s.into(),
            _ => Error::Validation(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::from(QuadFormError::Degenerate).exit_code(), 2);
        assert_eq!(
            Error::from(OracleError::ResourceLimit("x".into())).exit_code(),
            4
        );
        assert_eq!(
            Error::from(OracleError::NonIntegral("1/2".into())).exit_code(),
            3
        );
        assert_eq!(Error::from(SiegelError::MissingCertificate).exit_code(), 2);
        assert_eq!(
            Error::from(OracleError::Siegel(SiegelError::FunctionalEquation(-1))).exit_code(),
            3
        );
    }
}
