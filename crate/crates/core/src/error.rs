use thiserror::Error;

use crate::lattice::Simplex;

/// Errors raised by the library. Validation problems that are expected on
/// user input are reported through report structs instead; these variants
/// are for calls that cannot produce a meaningful answer at all.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension {0} exceeds the supported maximum of {max}", max = crate::f2::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("dimension mismatch: expected {expected}, found {found} ({context})")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: String,
    },

    #[error("unknown simplex {0}")]
    UnknownSimplex(Simplex),

    #[error("vertex index {0} out of range")]
    UnknownVertex(usize),

    #[error("simplex {0} is not contained in the polytope")]
    OutsidePolytope(Simplex),

    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    #[error("invalid real phase structure: {0}")]
    InvalidPhaseStructure(String),

    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An internal consistency check failed. Indicates a bug rather than bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors that indicate a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
