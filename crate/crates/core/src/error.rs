use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid weight k = {0} (need k >= 2)")]
    InvalidWeight(i64),
    #[error("slope {0} is outside the admissible range")]
    SlopeOutOfRange(String),
    #[error("degenerate case t = infinity (r = b)")]
    DegenerateT,
    #[error("malformed label: {0}")]
    MalformedLabel(String),
    #[error("a_p must be nonzero")]
    ZeroAp,
    #[error("a_p must have positive slope, got {0}")]
    NonPositiveSlope(String),
    #[error("(k, slope) = ({0}, {1}) is not in the table of tabulated weights")]
    NotInTable(i64, String),
    #[error("boundary case b = p - 1 is not covered")]
    BoundaryCase,
    #[error("index {0} out of range")]
    IndexOutOfRange(i64),
    #[error("labels are not in the image of the correspondence: {0}")]
    NotInImage(String),
    #[error("unramified value is symbolic: {0}")]
    UnknownLambda(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("operation requires degree 0, got degree {0}")]
    WrongDegree(usize),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("incompatible contexts: {0}")]
    ContextMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
