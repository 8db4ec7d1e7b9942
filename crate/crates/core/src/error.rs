use thiserror::Error;

use crate::diagnostic::Diagnostic;

/// Failures of operations on sequences, automata and specifications.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown {kind} `{id}`")]
    UnknownRef { kind: &'static str, id: String },

    #[error("movement `{0}` has a third-order profile, which cannot be timed")]
    UnsupportedProfile(String),

    #[error("power must be non-negative, got {0}")]
    NegativePower(i64),

    #[error("sequence positions start at 1, got {0}")]
    Index(i64),

    #[error("exploration budget of {0} exceeded")]
    Budget(usize),

    #[error("activity `{activity}` is too large: {reason}")]
    TooLarge { activity: String, reason: String },

    #[error("specification has {} validation error(s)", .0.len())]
    InvalidSpec(Vec<Diagnostic>),

    #[error("dispatch automaton has no initial state")]
    EmptyFsa,

    #[error("`{state}` is not a state of peripheral `{peripheral}`")]
    BadPin { peripheral: String, state: String },
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownRef { .. } => "E_UNKNOWN_REF",
            Error::UnsupportedProfile(_) => "E_UNSUPPORTED_PROFILE",
            Error::NegativePower(_) => "E_NEGATIVE_POWER",
            Error::Index(_) => "E_INDEX",
            Error::Budget(_) => "E_BUDGET",
            Error::TooLarge { .. } => "E_TOO_LARGE",
            Error::InvalidSpec(_) => "E_INVALID_SPEC",
            Error::EmptyFsa => "E_EMPTY_FSA",
            Error::BadPin { .. } => "E_BAD_PIN",
        }
    }

    pub(crate) fn unknown(kind: &'static str, id: impl ToString) -> Self {
        Error::UnknownRef {
            kind,
            id: id.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
