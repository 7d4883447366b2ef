use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a usable prime modulus")]
    BadPrime(u32),

    #[error("ring mismatch: {left} vs {right} variables")]
    RingMismatch { left: usize, right: usize },

    #[error("step budget exhausted after {pairs} S-pairs")]
    ResourceLimit { pairs: usize },

    #[error("positive-dimensional intersection (projective dimension {dim})")]
    PositiveDimensional { dim: i64 },

    #[error("curve is not arithmetically Cohen-Macaulay")]
    NotAcm,

    #[error("expected a curve, got projective dimension {dim}")]
    NotACurve { dim: i64 },

    #[error("inadmissible h-vector at index {index}")]
    InadmissibleHVector { index: usize },

    #[error("numerical character is unstable across seeds")]
    UnstableCharacter,

    #[error("no generic choice found after {attempts} attempts: {what}")]
    RetriesExhausted { what: String, attempts: usize },

    #[error("certificate {name} failed: expected {expected}, got {actual}")]
    Certificate {
        name: String,
        expected: String,
        actual: String,
    },

    #[error("h0 mismatch: expected {expected}, got {actual}")]
    H0Mismatch { expected: i64, actual: i64 },

    #[error("not a complete intersection: {0}")]
    NotCompleteIntersection(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),

    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
