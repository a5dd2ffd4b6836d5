use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input contained a NaN or infinite value.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    /// A matrix that must be symmetric was not.
    #[error("matrix not symmetric at ({row}, {col}): {upper} != {lower}")]
    NotSymmetric {
        row: usize,
        col: usize,
        upper: f64,
        lower: f64,
    },
    /// Operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A scalar or structural parameter is out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The input is valid but the requested operation is undefined on it.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// An iterative routine produced a non-finite value or failed to converge.
    #[error("numerical failure at iteration {iteration}: {message}")]
    NumericalFailure { iteration: usize, message: String },
    /// The operation would exceed an enumeration budget.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// A text-format file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that indicate a numerical breakdown rather than bad
    /// arguments; the CLI maps these to a distinct exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
