//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed textual input (rationals, flags, config values).
    #[error("parse error: {0}")]
    Parse(String),

    /// A computation would exceed a configured size budget. The message
    /// carries the predicted cost where it is known exactly.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A runtime verification found a counterexample or could not certify
    /// its claim at the requested scale.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
