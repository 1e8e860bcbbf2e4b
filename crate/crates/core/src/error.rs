use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("invalid rational literal `{0}`")]
    Rational(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid invariant label `{0}`")]
    Label(String),
}

impl ParseError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError::Schema { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("linear map is singular")]
    SingularMap,
    #[error("term {term} has degree {found}, expected {expected}")]
    NotHomogeneous { term: String, expected: usize, found: usize },
    #[error("exponent vector {term} has length {found}, expected {expected}")]
    WrongArity { term: String, expected: usize, found: usize },
}

/// Crate-level error, mostly for front ends that do not care which module
/// failed.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Transvect(#[from] crate::transvect::TransvectError),
    #[error(transparent)]
    Invar(#[from] crate::invar::InvarError),
    #[error(transparent)]
    Equiv(#[from] crate::equiv::EquivError),
    #[error(transparent)]
    Connect(#[from] crate::connect::ConnectError),
    #[error(transparent)]
    Model(#[from] crate::models::ModelError),
}
