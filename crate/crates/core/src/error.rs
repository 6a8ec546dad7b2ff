use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator is divisible by the characteristic {0}")]
    NonInvertibleDenominator(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero is not an element of the multiplicative group")]
    ZeroElement,
    #[error("subgroup needs at least one generator")]
    EmptySubgroup,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("scalar exceeds the 64-bit factorization bound")]
    ScalarTooLarge,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("zero vector has no height")]
    ZeroVector,
    #[error("map does not have full rank")]
    RankDeficient,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("maps do not commute with the differentials in degree {0}")]
    NotChainMap(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("homology classes do not form a basis in degree {0}")]
    NotABasis(usize),
    #[error("generators {0} and {1} are not an isolated cancelling pair")]
    DeathNotCancellable(usize, usize),
    #[error("generator {0} appears in the boundary of generator {1}")]
    SwapBlockedByIncidence(usize, usize),
    #[error("generators {0} and {1} have different degrees")]
    SlideDegreeMismatch(usize, usize),
    #[error("position {0} is out of range")]
    PositionOutOfRange(usize),
    #[error("swap at {0} does not exchange two generators of equal degree")]
    NotAMaxwellEvent(usize),
    #[error("state after step {0} has homological points")]
    AcyclicityViolated(usize),
    #[error("the parity law needs a field of characteristic other than 2")]
    CharTwoField,
    #[error("step {step}: {source}")]
    Move { step: usize, source: Box<Error> },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}
