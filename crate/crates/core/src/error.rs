use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sites are affinely dependent within tolerance")]
    DegenerateSites,
    #[error("point coincides with the sphere center")]
    AtCenter,
    #[error("point lies on the sphere")]
    OnSphere,
    #[error("dimension {0} is not supported on this code path")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("too few points: {n} < {min}")]
    TooFewPoints { n: usize, min: usize },
    #[error("no acceptable round after {0} retries")]
    RetriesExhausted(u32),
    #[error("k = {k} is too large for this point set (max {max})")]
    KTooLarge { k: usize, max: usize },
    #[error("labels do not partition the point set: {0}")]
    BadPartition(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("guard induces a degenerate halfflat")]
    DegenerateGuard,
    #[error("solver did not terminate within {0} iterations")]
    NonTermination(usize),
    #[error("no separator found with at most {0} guards")]
    NoSolutionWithinBudget(usize),
    #[error("exchange size {0} exceeds the supported maximum of 6")]
    ExchangeBudgetExceeded(usize),
    #[error("time cap of {0} s reached")]
    TimeCapExceeded(f64),
    #[error("instance too large for brute force: {0}")]
    TooLarge(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
