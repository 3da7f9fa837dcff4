use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("modulus mismatch between operands")]
    ModulusMismatch,

    #[error("degree overflow")]
    DegreeOverflow,

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("invalid degree {0}: must be at least 1")]
    InvalidDegree(u32),

    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(BigInt),

    #[error("point {index} is the zero vector")]
    ZeroPoint { index: usize },

    #[error("point {index}: entries not coprime (gcd {gcd})")]
    NotCoprime { index: usize, gcd: BigInt },

    #[error("points are scalar multiples of each other; no separating form exists")]
    ScalarMultiples,

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("value {value} is not a unit modulo {modulus}")]
    NotUnit { value: BigInt, modulus: BigInt },

    #[error("moduli {0} and {1} are not coprime")]
    ModuliNotCoprime(BigInt, BigInt),

    #[error("expected a prime, got {0}")]
    NotPrime(BigInt),

    #[error("primality of {0} cannot be certified deterministically")]
    PrimalityUncertified(BigInt),

    #[error("factorization budget exhausted on cofactor {0}")]
    FactorBudgetExceeded(BigInt),

    #[error("expected a positive integer, got {0}")]
    NotPositive(BigInt),

    #[error("witness degree {required} exceeds budget {budget}{}", forced_note(*.forced_divisor))]
    DegreeBudgetExceeded {
        required: u64,
        budget: u64,
        /// Every witness degree is a multiple of this, when known.
        forced_divisor: Option<u64>,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("malformed polynomial: {0}")]
    MalformedPoly(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("internal verification failed: {0}")]
    Verification(String),
}

fn forced_note(divisor: Option<u64>) -> String {
    match divisor {
        Some(d) => format!(" (every witness degree is a multiple of {d})"),
        None => String::new(),
    }
}
