use thiserror::Error;

/// Every failure the numerical layer can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported field: D = {0} is not one of the nine class-number-one imaginary quadratic fields")]
    UnsupportedField(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("argument outside the supported numeric window: {0}")]
    OutOfWindow(String),
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("truncation failure: certified cutoff {needed} exceeds max_norm_cutoff {max}")]
    TruncationFailure { needed: u64, max: u64 },
    #[error("no convergence: {0}")]
    Nonconvergence(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate coefficient index ({a}, {b}) at line {line}")]
    DuplicateIndex { a: i64, b: i64, line: usize },
    #[error(
        "coverage gap: coefficient for ({a}, {b}) with norm {norm} <= norm_coverage is missing"
    )]
    CoverageGap { a: i64, b: i64, norm: i64 },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error(
        "coverage exceeded: requested norm bound {requested} > available coverage {available}"
    )]
    CoverageExceeded { requested: i64, available: i64 },
    #[error("policy mismatch: {0}")]
    PolicyMismatch(String),
    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable reason, used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedField(_) => "unsupported-field",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Pole(_) => "pole",
            Error::OutOfWindow(_) => "window",
            Error::SingularPoint(_) => "singular-point",
            Error::TruncationFailure { .. } => "truncation",
            Error::Nonconvergence(_) => "nonconvergence",
            Error::Parse { .. } => "parse",
            Error::DuplicateIndex { .. } => "duplicate-index",
            Error::CoverageGap { .. } => "coverage-gap",
            Error::FieldMismatch(_) => "field-mismatch",
            Error::CoverageExceeded { .. } => "coverage-exceeded",
            Error::PolicyMismatch(_) => "policy-mismatch",
            Error::InvalidGroupElement(_) => "invalid-group-element",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
