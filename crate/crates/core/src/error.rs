use thiserror::Error;

/// Errors raised by ring construction, searches and witness transforms.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("invalid size {0}: must be at least 1")]
    InvalidSize(usize),
    #[error("element is not idempotent: {0}")]
    NotIdempotent(String),
    #[error("element does not belong to the ring: {0}")]
    NotAMember(String),
    #[error("elements belong to different rings")]
    OwnerMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cardinality {cardinality} exceeds enumeration cap {cap}")]
    CapExceeded { cardinality: String, cap: u64 },
    #[error("cannot embed size {from} into smaller size {to}")]
    EmbedSize { from: usize, to: usize },
    #[error("row is not right unimodular")]
    NotUnimodular,
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid equation: {0}")]
    InvalidEquation(String),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("ambient matrix ring too small: need {required} slots, have {available}")]
    AmbientTooSmall { required: usize, available: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("gcd hypothesis fails: gcd of the entries is not 1")]
    GcdHypothesis,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
