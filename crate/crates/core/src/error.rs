use thiserror::Error;

#[derive(Debug, Error)]
pub enum CuError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("space mismatch: operands live on different spaces")]
    SpaceMismatch,
    #[error("unsupported space for this operation: {0}")]
    UnsupportedSpace(String),
    #[error("sequence is not increasing at index {0}")]
    NotIncreasing(usize),
    #[error("element not in the finite part: {0}")]
    NotFinitePart(String),
    #[error("no maximum exists: {0}")]
    NoMaximum(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("level cap exceeded: {0}")]
    CapExceeded(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("basis stability violated: {0}")]
    Stability(String),
    #[error("comparison hypothesis not satisfied at level {level}: {detail}")]
    Hypothesis { level: usize, detail: String },
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("intertwining hypothesis violated at stage {0}")]
    ChainBroken(usize),
    #[error("no approximating chain found within horizon {0}")]
    NoChain(usize),
    #[error("evaluation table is not monotone: {0}")]
    NotMonotone(String),
    #[error("ambiguous maximum in limit basis: {0}")]
    Ambiguous(String),
    #[error("invalid value: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CuError>;
