use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("non-invertible element {0}")]
    NonInvertible(String),
    #[error("polynomial {0} is reducible")]
    Reducible(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: characteristic {left} vs {right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("index ({row}, {col}) out of range for {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid difference set: {0}")]
    InvalidDifferenceSet(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("unsupported rank: {0}")]
    UnsupportedRank(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no such label: {0}")]
    NoSuchLabel(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("preconditions unmet: {0}")]
    PreconditionsUnmet(String),
}
