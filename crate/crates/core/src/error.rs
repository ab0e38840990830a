use thiserror::Error;

/// Errors raised when an input falls outside an operation's domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{divisor} does not divide {n}")]
    NotDivisor { n: u64, divisor: u64 },

    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("value {value} is out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },

    #[error("modulus {n} exceeds the enumeration limit {limit}")]
    TooLarge { n: u64, limit: u64 },

    #[error("arithmetic overflow computing {0}")]
    Overflow(String),

    #[error("weight set must be nonempty")]
    EmptyWeights,

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
