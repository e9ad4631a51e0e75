use alloc::boxed::Box;
use alloc::string::String;

use crate::cognitons::DistributionFit;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("outcome group has probability {0:e}, cannot condition on it")]
    ZeroProbability(f64),

    #[error("vector lies outside the state space (smallest eigenvalue {0:e})")]
    OutsideStateSpace(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("phases are not normalizable (consistency sum {0:e})")]
    NonNormalizablePhases(f64),

    #[error("model violation: predicted probability {value:e} at exemplar {index}")]
    ModelViolation { index: usize, value: f64 },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("fit error: {0}")]
    Fit(String),

    #[error("fit did not converge from any start (best sse_log {:e})", .best.sse_log)]
    FitFailure { best: Box<DistributionFit> },

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("segment {index} is not timelike")]
    NonTimelike { index: usize },
}

impl Error {
    /// True for failures of a numerical procedure on otherwise valid input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Fit(_) | Error::FitFailure { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
