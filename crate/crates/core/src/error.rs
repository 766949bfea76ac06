use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("empty point set")]
    EmptySet,
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("unknown point label {0}")]
    UnknownLabel(String),
    #[error("enumeration of {needed} subsets exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
    #[error("point lies on the projection center")]
    PointOnCenter,
    #[error("points are equal")]
    EqualPoints,
    #[error("zero form")]
    ZeroForm,
    #[error("field too large for exhaustive scan: {0}")]
    FieldTooLarge(String),
    #[error("point {0} is not separable")]
    NotSeparable(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("invariant violated at {label}: {reason}")]
    InvariantViolation { label: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
