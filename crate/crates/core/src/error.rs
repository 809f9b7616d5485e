use thiserror::Error;

/// Errors raised by constructors and geometric operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("structure constants are not antisymmetric (defect {0:e})")]
    NotAntisymmetric(f64),

    #[error("Jacobi identity violated (defect {0:e})")]
    JacobiViolated(f64),

    #[error("Gram matrix is not symmetric (defect {0:e})")]
    GramNotSymmetric(f64),

    #[error("Gram matrix is not positive definite (leading minor {index} = {value:e})")]
    GramNotPositiveDefinite { index: usize, value: f64 },

    #[error("skewness operator does not come from a symmetric cubic form (defect {0:e})")]
    AsymmetricSkewness(f64),

    #[error("vectors span a degenerate plane (area {0:e})")]
    DegeneratePlane(f64),

    #[error("connection is not flat: curvature defect {defect:e} exceeds tolerance {tolerance:e}")]
    NotFlat { defect: f64, tolerance: f64 },

    #[error("Sasakian data violates {invariant} (defect {defect:e})")]
    InvalidSasakian { invariant: &'static str, defect: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sweep grid is empty")]
    EmptyGrid,
}

impl Error {
    /// True for errors that report a violated mathematical invariant of
    /// otherwise well-formed input (as opposed to malformed parameters).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotAntisymmetric(_)
                | Error::JacobiViolated(_)
                | Error::GramNotSymmetric(_)
                | Error::GramNotPositiveDefinite { .. }
                | Error::AsymmetricSkewness(_)
                | Error::InvalidSasakian { .. }
                | Error::NotFlat { .. }
                | Error::DegeneratePlane(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
