use thiserror::Error;

/// Errors raised by polytope construction, enumeration and the certificate
/// machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters must be strictly increasing (tau_{index} >= tau_{next})", next = index + 1)]
    NonIncreasingParameters { index: usize },

    #[error("a {d}-dimensional cyclic polytope needs at least {} vertices, got {n}", d + 1)]
    TooFewVertices { d: usize, n: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("bad index subset: {0}")]
    BadSubset(String),

    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("instance too large: {what} (predicted {predicted}, budget {budget})")]
    InstanceTooLarge {
        what: String,
        predicted: u128,
        budget: u64,
    },

    #[error("index set must be non-empty")]
    EmptySet,

    #[error("integrality violated: {0}")]
    IntegralityViolation(String),

    #[error("bad recursion pivot: {0}")]
    BadPivot(String),

    #[error("duplicate index {0}")]
    DuplicateIndex(usize),

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("sampling exhausted after {attempts} attempts")]
    SamplingExhausted { attempts: u32 },

    #[error("input must be sorted ascending")]
    UnsortedInput,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("guarantee violated: {0}")]
    GuaranteeViolated(String),

    #[error("no admissible integer solution: {0}")]
    NoSolution(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),

    #[error("witness refuted: {0}")]
    WitnessRefuted(String),

    #[error("index set {0:?} is not a facet")]
    NotAFacet(Vec<usize>),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
