use thiserror::Error;

/// Errors surfaced by constructions and traces.
///
/// Precondition violations and malformed input are distinguished from
/// `Internal`, which signals that an invariant the theory guarantees was
/// observed to fail at runtime.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exponent {num}/{den} of q does not resolve to an integer power of hq (n = {n})")]
    FractionalPower { n: i64, num: i64, den: i64 },
    #[error("unknown vertex identifier `{0}`")]
    UnknownVertex(String),
    #[error("presentation mismatch: operands live in different quantum tori")]
    PresentationMismatch,
    #[error("incompatible transition matrix: (H Q' H^t)[{row}][{col}] = {got}, expected {expected}")]
    Incompatible {
        row: String,
        col: String,
        expected: i64,
        got: i64,
    },
    #[error("matrix Q is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(String, String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("vector is not balanced at vertex {0}")]
    Unbalanced(String),
    #[error("monomial exponent lies outside the admissible monoid at vertex {0}")]
    OutsideMonoid(String),
    #[error("element is not invertible (needs a single monomial with unit coefficient)")]
    NotInvertible,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
