use thiserror::Error;

/// Errors raised by model construction, evaluation and synthesis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("constraint not applicable: {0}")]
    ConstraintInapplicable(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("direction ({u}, {v}) is outside the visible region")]
    OutsideVisibleRegion { u: f64, v: f64 },

    #[error("direction ({u}, {v}) is not a node of the pattern grid")]
    DirectionNotOnGrid { u: f64, v: f64 },

    #[error("inconsistent mask parameters: {0}")]
    InconsistentMask(String),

    #[error("empty search space")]
    EmptySearchSpace,

    #[error("non-finite cost {value} for particle {particle}")]
    NonFiniteCost { particle: usize, value: f64 },

    #[error("codebook: {0}")]
    Codebook(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
