use thiserror::Error;

/// Errors raised by the A-calculus, the inequality registry and the tooling around it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {allowed:.3e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("operator A is not positive (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("operator is not A-positive")]
    NotAPositive,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("{0} did not converge")]
    ConvergenceFailure(&'static str),

    #[error("context has rank 0; the A-unit sphere is empty")]
    DegenerateContext,

    #[error("vector is not A-normalized (||e||_A = {norm})")]
    NotUnitVector { norm: f64 },

    #[error("unknown inequality id `{0}`")]
    UnknownId(String),

    #[error("parameter out of domain: {0}")]
    DomainViolation(String),

    #[error("missing operand `{0}`")]
    MissingOperand(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("operator is singular")]
    SingularOperator,

    #[error("preconditioner is singular")]
    SingularPreconditioner,

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(expected: impl ToString, got: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    /// True for errors caused by malformed input rather than by the mathematics.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::NonFinite)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
