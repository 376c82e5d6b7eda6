use thiserror::Error;

/// Errors raised by the engine on malformed input or violated preconditions.
///
/// Mathematical outcomes such as "this mutation is not Laurent" are not
/// errors; they are returned as values (see [`crate::laurent::Mutated`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("mutation factor must have constant term 1")]
    BadFactor,

    #[error("point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),

    #[error("variable index {index} out of range for {n} variables")]
    VariableIndex { index: usize, n: usize },

    #[error("vanishing order is undefined for a constant divisor")]
    ConstantDivisor,

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("the zero vector has no primitive form")]
    ZeroVector,

    #[error("vectors do not extend to a basis of the lattice")]
    NotUnimodularlyCompletable,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("mutation path {path:?} left the Laurent ring: {detail}")]
    NonLaurentPath { path: Vec<usize>, detail: String },

    #[error("depth {depth} exceeds the configured limit {limit}")]
    DepthLimit { depth: usize, limit: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
