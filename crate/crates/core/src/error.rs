use thiserror::Error;

/// Errors raised by the algebraic and numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("q mismatch: {left} vs {right}")]
    PhaseMismatch { left: String, right: String },

    #[error("q must be rational (a root of unity) here, got {0}")]
    IrrationalPhase(String),

    #[error("{field}: expected a unit-modulus complex number, |{field}| = {modulus}")]
    NonUnit { field: &'static str, modulus: f64 },

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{field}: expected {expected} entries, found {found}")]
    Arity {
        field: String,
        expected: usize,
        found: usize,
    },

    #[error("{field}[{index}]: non-finite value")]
    NonFinite { field: String, index: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid argument `{field}`: {message}")]
    InvalidArgument { field: &'static str, message: String },

    #[error("derivation relation violated at (k, l) = ({k}, {l}), residual {residual:e}")]
    RelationViolation { k: i64, l: i64, residual: f64 },

    #[error("compatibility -a_Q t = a_P s violated at (t, s) = ({t}, {s}), residual {residual:e}")]
    Compatibility { t: f64, s: f64, residual: f64 },

    #[error("division branches disagree on the overlap, residual {residual:e}")]
    BranchDisagreement { residual: f64 },

    #[error("small divisor {modulus:e} at index {index}")]
    SmallDivisor { index: i64, modulus: f64 },

    #[error("form is not positive: phi(f* f) = {value}")]
    NotPositive { value: String },

    #[error("null space is not a left ideal, residual {residual:e}")]
    NotLeftIdeal { residual: f64 },

    #[error("invariant `{name}` violated, residual {residual:e}")]
    InvariantViolation { name: &'static str, residual: f64 },

    #[error("degenerate probe: norm {norm:e}")]
    DegenerateProbe { norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            message: message.into(),
        }
    }

    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        Error::Json {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
