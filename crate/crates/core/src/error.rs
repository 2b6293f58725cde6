use thiserror::Error;

use crate::freeness::FreenessVerdict;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An odd sphere exponent has no biquotient lift to SU(2).
    #[error("sphere weights ({0}) contain an odd exponent and admit no SU(2) lift")]
    NoLift(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Arithmetic left the range of the machine integers used internally.
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    /// The action has no smooth quotient; the verdict carries the witness.
    #[error("action is not effectively free ({})", .0.status)]
    Rejected(Box<FreenessVerdict>),

    /// A consistency check between two independent routes failed. Always a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
