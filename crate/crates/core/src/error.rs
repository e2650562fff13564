use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error: the
/// inputs were well-formed but violate a mathematical precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("series does not terminate: no numerator parameter is a nonpositive integer -{n}")]
    NotTerminating { n: u32 },

    #[error("vanishing Pochhammer factor {factor}")]
    VanishingPochhammer { factor: String },

    #[error("degree {n} outside the orthogonal range 0..={bound}")]
    DegreeOutOfRange { n: u32, bound: u32 },

    #[error("parameter region violated at stage {stage}: {reason}")]
    RegionViolation { stage: usize, reason: String },

    #[error("tail mass {tail:e} exceeds the budget {budget:e}")]
    TailBudget { tail: f64, budget: f64 },

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("series diverges at working precision: {0}")]
    Divergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
