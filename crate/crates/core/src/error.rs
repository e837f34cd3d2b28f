use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must be below 2^32)")]
    PrimeTooLarge(u64),
    #[error("{value} is divisible by p = {p}")]
    DivisibleByP { value: String, p: u64 },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{value} is not invertible mod {p}")]
    NotInvertible { value: u64, p: u64 },
    #[error("{what} exceeds the guard ({limit}); pass an explicit override to run it")]
    RangeGuard { what: String, limit: u64 },
    #[error("probabilities sum to {sum} mod {p}, not 1")]
    SumNotOne { sum: u64, p: u64 },
    #[error("a distribution needs at least one entry")]
    EmptyDistribution,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("map is not measure-preserving at fibre over {label:?}: fibre sums to {found}, expected {expected}")]
    NotMeasurePreserving { label: String, expected: u64, found: u64 },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("domain label {0:?} has no image")]
    Unmapped(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("labels and probabilities differ in length ({labels} vs {probs})")]
    LabelCount { labels: usize, probs: usize },
    #[error("codomain of the first map is not the domain of the second")]
    CompositionMismatch,
    #[error("denominator of entry {index} is divisible by p = {p}")]
    DenominatorDivisibleByP { index: usize, p: u64 },
    #[error("entry {index} is negative")]
    NegativeProbability { index: usize },
    #[error("rational probabilities sum to {0}, not 1")]
    RationalSumNotOne(String),
    #[error("polynomial of degree {degree} exceeds p = {p}")]
    DegreeTooHigh { degree: u32, p: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
