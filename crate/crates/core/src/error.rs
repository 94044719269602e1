use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a recovered plaintext column was rejected during decryption.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegrityError {
    #[error("cipher block has {found} entries, key order requires {expected}")]
    BlockLength { expected: usize, found: usize },
    #[error("ciphertext block size m={found} does not match key m={expected}")]
    BlockSize { expected: usize, found: usize },
    #[error("recovered entry {index} is not an integer: {value}")]
    NonInteger { index: usize, value: Rational },
    #[error("recovered entry {index} is outside the byte range 0..=255: {value}")]
    OutOfRange { index: usize, value: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular (determinant {det})")]
    Singular { det: Rational },
    #[error("cauchy entry ({i},{j}) has x_i + y_j = 0")]
    CauchyPole { i: usize, j: usize },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("invalid key parameter: {0}")]
    InvalidKey(String),
    #[error("integrity check failed: {0}")]
    Integrity(#[from] IntegrityError),
    #[error("malformed padding: {0}")]
    Padding(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("known-plaintext attack inconclusive: {0}")]
    AttackInconclusive(String),
    #[error("malformed {what}: {reason}")]
    Format { what: &'static str, reason: String },
}

impl Error {
    pub(crate) fn format(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Format {
            what,
            reason: reason.into(),
        }
    }
}
