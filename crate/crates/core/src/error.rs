use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants are grouped so that front ends can map them onto stable exit
/// codes: input problems, numeric-consistency failures, resource guards, and
/// internal invariant violations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("rank mismatch: expected {expected} labels, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("weight {weight} lies outside the level-{level} alcove")]
    OutOfLevel { weight: String, level: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("involution datum failed validation: {0}")]
    Validation(String),

    #[error("numeric consistency failure: {0}")]
    Numeric(String),

    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("odd fusion coefficient {coeff} on {weight} where the μ-route needs an even one")]
    EvennessViolation { weight: String, coeff: i64 },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) | Error::EvennessViolation { .. } | Error::Internal(_) => 2,
            Error::Resource(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
