use thiserror::Error;

/// Shape and index errors raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("matrix size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Text and JSON decoding failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed scalar {0:?}")]
    Scalar(String),
    #[error("malformed document: {0}")]
    Invalid(String),
}

impl From<ParseError> for AlgebraError {
    fn from(e: ParseError) -> Self {
        AlgebraError::Invalid(e.to_string())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), AlgebraError> {
    if expected == found {
        Ok(())
    } else {
        Err(AlgebraError::DimensionMismatch { expected, found })
    }
}
