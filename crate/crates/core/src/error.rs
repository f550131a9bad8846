use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("ring parameters out of supported range: {0}")]
    UnsupportedRing(String),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("operation requires a prime residue field (m = 1), got m = {0}")]
    RequiresPrimeField(usize),
    #[error("invalid digits: {0}")]
    InvalidDigits(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("ring length N = {found} does not match nr + 1 = {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exponent vector is not dominant: {0:?}")]
    NotDominant(Vec<usize>),
    #[error("exponent vectors are not comparable: {0:?} and {1:?}")]
    Incomparable(Vec<usize>, Vec<usize>),
    #[error("witness product check failed: {0}")]
    WitnessMismatch(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
