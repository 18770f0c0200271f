use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("nilpotency class mismatch: {left} vs {right}")]
    ClassMismatch { left: u8, right: u8 },

    #[error("unsupported modulus {modulus}: {reason}")]
    UnsupportedModulus { modulus: u64, reason: &'static str },

    /// `map(left * right) != map(left) * map(right)`; indices are domain elements.
    #[error("map is not a homomorphism: fails on the pair ({left}, {right})")]
    NotHomomorphism { left: usize, right: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
