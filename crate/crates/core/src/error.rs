use thiserror::Error;

use crate::maxplus::MaxPlus;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: String,
        expected: String,
        found: String,
    },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    /// A vector handed to a pseudo half-space routine must have first
    /// coordinate `0` or `-inf`.
    #[error("first coordinate must be 0 or -inf, found {0}")]
    UnnormalizedInput(MaxPlus),

    #[error("generator {index} has first-row entry {value}, expected 0 or -inf")]
    UnnormalizedGenerators { index: usize, value: MaxPlus },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("disturbance set has no bounded part (no conv generators)")]
    EmptyDisturbance,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn dims(
        what: impl Into<String>,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::DimensionMismatch {
            what: what.into(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        match self {
            already @ Error::Stage { .. } => already,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// The error with any stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for malformed input (bad syntax or inconsistent shapes), false
    /// for violated operator preconditions.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root(),
            Error::Parse { .. } | Error::DimensionMismatch { .. } | Error::IndexOutOfRange { .. }
        )
    }
}
