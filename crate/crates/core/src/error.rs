use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NaN is not a tropical value")]
    NotANumber,
    #[error("non-finite value {0} (bottom must be given explicitly)")]
    NonFinite(f64),
    #[error("{rows}x{cols} shape does not match {len} entries")]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("tropical power requires L >= 1")]
    ZeroPower,
    #[error("row {row} has no finite entry")]
    AllBottomRow { row: usize },
    #[error("no finite path reaches node {target}")]
    NoFinitePath { target: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("inverse temperature must be finite and >= 0, got {0}")]
    InvalidBeta(f64),
    #[error("inverse temperature must be > 0 for log-space forms")]
    ZeroBeta,
    #[error("empty input")]
    EmptyInput,
    #[error("values must be finite for softmax attention (entry {index})")]
    NonFiniteValues { index: usize },
    #[error("operation needs scalar values, got dimension {dim}")]
    ScalarValuesRequired { dim: usize },
    #[error("{paths} paths exceed the enumeration guard of {limit}; use the dynamic program")]
    GuardExceeded { paths: u128, limit: u64 },
    #[error("beta schedule must be nonempty, positive and strictly ascending")]
    BetaSchedule,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    /// True for errors caused by malformed input documents rather than by the math.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Schema(_))
    }
}
