use thiserror::Error;

/// Errors produced by the engine.
///
/// The CLI maps [`Error::InvalidArgument`] and [`Error::DimensionMismatch`] to
/// exit code 2 and every other variant to exit code 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Elimination found no usable pivot in `column` (0-based).
    #[error("singular matrix: no pivot in column {column}")]
    SingularMatrix { column: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("quadrature did not converge: achieved error bound {achieved:e}")]
    Numeric { achieved: f64 },

    #[error("matrix mismatch: {0}")]
    Mismatch(String),

    /// Two independent evaluation routes disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable name of the variant, printed on stderr by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::Domain(_) => "DomainError",
            Error::Resource(_) => "ResourceError",
            Error::Numeric { .. } => "NumericError",
            Error::Mismatch(_) => "MatrixMismatch",
            Error::Inconsistent(_) => "Inconsistent",
            Error::Parse(_) => "ParseError",
        }
    }

    pub fn is_argument_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::DimensionMismatch(_) | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
