use thiserror::Error;

/// Failure classes shared by every module of the crate.
///
/// The variants map one-to-one onto the command-line exit-code contract:
/// [`Error::Parse`] is a usage error, [`Error::InvariantViolation`] is an
/// internal failure and everything else is a violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("insufficient order: have {have}, need at least {need}")]
    InsufficientOrder { have: usize, need: usize },

    #[error("operator is not strictly triangular")]
    NotStrict,

    #[error("operator is not unitriangular (diagonal must be all ones)")]
    NotUnitriangular,

    #[error("operator is not triangular: nonzero entry at ({row}, {col})")]
    NotTriangular { row: usize, col: usize },

    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: String },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("not in U(vect) image: degree {degree} component is not spanned by word images")]
    NotInImage { degree: usize },

    #[error("unknown {what}: `{name}`")]
    Unknown { what: &'static str, name: String },

    #[error("parse error at `{key}`: {message}")]
    Parse { key: String, message: String },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub fn parse(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
