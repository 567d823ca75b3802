//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: broken invariants, unparsable files, bad parameters.
    #[error("validation error: {0}")]
    Validation(String),

    /// Lattice basis rows are linearly dependent.
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    /// An exhaustive procedure would exceed its configured enumeration cap.
    #[error("refused scale: {needed} candidates exceed cap {cap}")]
    RefusedScale { needed: u128, cap: u128 },
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
