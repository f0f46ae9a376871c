use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {modulus:#x} is reducible over GF(2)")]
    ReducibleModulus { modulus: u64 },
    #[error("modulus {modulus:#x} does not have degree {expected}")]
    DegreeMismatch { modulus: u64, expected: u32 },
    #[error("unsupported field degree {0} (expected 2..=32)")]
    UnsupportedDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("linear coefficient of the quadratic is zero")]
    ZeroLinearCoefficient,
    #[error("k = {k} is not coprime to the degree {degree}")]
    NotCoprime { k: u32, degree: u32 },
    #[error("theta = 1 yields alpha = beta = 1")]
    ThetaYieldsTrivialPair,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("direction a must be nonzero")]
    ZeroDirection,
    #[error("output difference b must be nonzero")]
    ZeroB,
    #[error("table is not a permutation")]
    NotAPermutation,
    #[error("invalid family parameters: {0}")]
    InvalidFamilyParams(String),
    #[error("scale refusal: {0}")]
    ScaleRefusal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
