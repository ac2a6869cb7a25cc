use thiserror::Error;

/// Errors reported by the contract checks of the public operations.
#[derive(Debug, Error, PartialEq, Clone)]
pub enum Error {
    #[error("label {0} is not an element of the required set")]
    LabelNotInSet(usize),
    #[error("label {0} must not be an element of the excluded set")]
    LabelInSet(usize),
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid level {level} for a set of size {size}")]
    InvalidLevel { level: usize, size: usize },
    #[error("chain degrees are mixed: expected {expected}, got {got}")]
    MixedDegree { expected: i64, got: i64 },
    #[error("unknown degree {degree} for n = {n}")]
    UnknownDegree { degree: i64, n: usize },
    #[error("chain is not a cycle under the requested filter")]
    NotACycle,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("input outside the admissible domain: {0}")]
    OutsideDomain(String),
    #[error("point is not on the complex unit sphere (|z^2 - 1| = {0:e})")]
    OffSphere(f64),
    #[error("kinematics below threshold: -p^2 = {0} <= (m1+m2)^2 = {1}")]
    BelowThreshold(f64, f64),
    #[error(
        "pinch cell has coefficient {0} on its own intersection; cannot normalize orientation"
    )]
    NonUnitSelfCoefficient(i64),
}
