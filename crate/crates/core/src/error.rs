use thiserror::Error;

/// Errors raised by the exact-arithmetic and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different fields ({0} vs {1})")]
    MixedField(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("negative degree {0}")]
    NegativeDegree(i64),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("curve is not smooth at the point (Jacobian corank {corank})")]
    SingularPoint { corank: usize },
    #[error("required order {required} exceeds jet truncation {truncation}")]
    TruncationTooSmall { required: usize, truncation: usize },
    #[error("form vanishes identically on the curve")]
    IdenticallyZero,
    #[error("emptiness undecided within bound {bound}")]
    Indeterminate { bound: usize },
    #[error("singular locus is positive-dimensional")]
    NonReduced,
    #[error("linear system is not stable under the group element")]
    NotInvariant,
    #[error("characteristic {0} divides the group order")]
    BadCharacteristic(u64),
    #[error("search exhausted after {attempts} attempts at stage `{stage}`")]
    SearchExhausted { stage: String, attempts: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
