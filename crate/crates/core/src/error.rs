use thiserror::Error;

use crate::symbolic::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable-set mismatch: {left} vs {right} variables")]
    VariableMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },

    #[error("arity mismatch: expected {expected} values, got {actual}")]
    Arity { expected: usize, actual: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("transition matrix is singular")]
    SingularMatrix,

    #[error("transition does not preserve the canonical form: {0}")]
    NotSymplectic(String),

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("invalid integration parameters: {0}")]
    Integration(String),

    #[error("state has non-finite entries")]
    NonFinite,

    #[error("malformed input: {0}")]
    Input(String),
}
