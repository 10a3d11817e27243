//! Error types shared across the toolkit.

use thiserror::Error;

/// Structural faults found while parsing a serialized envelope.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseFault {
    #[error("bad magic {found:02x?}, expected \"CCH1\"")]
    BadMagic { found: [u8; 4] },
    #[error("unsupported version {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("truncated envelope: need at least {expected} bytes, got {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("length mismatch: header declares {declared} ciphertext bytes, body holds {actual}")]
    LengthMismatch { declared: u64, actual: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Tag verification failed; no plaintext is released. Deliberately does
    /// not reveal whether the passphrase or the secret key was wrong.
    #[error("authentication failure: envelope did not verify")]
    AuthenticationFailure,

    #[error("envelope parse error: {0}")]
    Parse(#[from] ParseFault),

    #[error("entropy source unavailable: {0}")]
    EntropyUnavailable(String),

    #[error("zero variance: adjacent correlation is undefined on constant input")]
    ZeroVariance,

    /// The X25519 exchange produced the all-zero secret (low-order peer point).
    #[error("non-contributory key exchange: shared secret is all zero")]
    NonContributory,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
