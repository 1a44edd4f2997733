use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
///
/// The variants map onto the CLI exit codes: `Input`, `Contract`, `Class`
/// and `Parse` are caller mistakes (exit 2), `Resource` means a search hit
/// its configured limit (exit 3).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-range input (agent ids, mismatched sizes, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A documented precondition of the operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A valuation falls outside the set allowed by the game's class.
    #[error("class violation: {0}")]
    Class(String),

    /// A search exceeded its memory or size guard.
    #[error("resource limit exceeded: {what} (visited {visited})")]
    Resource { what: String, visited: usize },

    /// Interchange data could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn class(msg: impl Into<String>) -> Self {
        Error::Class(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
