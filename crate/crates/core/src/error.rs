//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus polynomial is zero")]
    ZeroModulus,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("pattern {pattern} does not apply to m={m}")]
    PatternParityMismatch { pattern: String, m: usize },
    #[error("input has {got} bits but circuit is {want} wires wide")]
    WidthMismatch { want: usize, got: usize },
    #[error("circuit contains a non-linear gate at index {index}")]
    NonlinearGate { index: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid root-family parameter: {0}")]
    BadFamilyParam(String),
    #[error("polynomial shape unsupported: {0}")]
    PolyShapeUnsupported(String),
    #[error("strategy {strategy} does not match the shape of {poly}")]
    StrategyShapeMismatch { strategy: String, poly: String },
    #[error("multiplication formula invalid: {0}")]
    FormulaInvalid(String),
    #[error("unsupported gate at index {index}")]
    UnsupportedGate { index: usize },
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("verification failed, witness input {witness}")]
    VerificationFailed { witness: String },
    #[error("no polynomial found for m={m}")]
    NoPolynomialFound { m: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
