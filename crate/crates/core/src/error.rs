use thiserror::Error;

/// Errors raised by the counting library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("argument must be positive: {0}")]
    Zero(&'static str),

    #[error("logarithm argument must be positive, got {0}")]
    NonPositiveLog(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("degree {0} is outside the range of the irreducibility criterion (t >= 2)")]
    DegreeTooSmall(u64),

    #[error("zero has no multiplicative inverse or order")]
    ZeroElement,

    #[error("element does not belong to F_{q}")]
    ForeignElement { q: u64 },

    #[error("constant polynomials have no irreducibility decision")]
    ConstantPolynomial,

    #[error("work estimate {work} exceeds the brute-force cap {cap}")]
    CapExceeded { work: u128, cap: u128 },

    #[error("parameters out of regime: {0}")]
    OutOfRegime(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
