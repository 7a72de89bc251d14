use alloc::string::String;

use crate::coeff::QPoly;

/// Errors raised by the exact algebra layer and the geometric algorithms built on it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// Inversion of a nonzero element failed because the modulus is reducible.
    /// `factor` is a nontrivial monic factor of the modulus; callers may split on it.
    #[error("zero divisor in number field: modulus has the proper factor {factor}")]
    ZeroDivisor { factor: QPoly },
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("expected a univariate polynomial")]
    NotUnivariate,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("implicit function hypothesis fails: {0}")]
    ImplicitFunction(String),
    #[error("series truncation underflow")]
    TruncationUnderflow,
    #[error("P and Q share the common factor {0}")]
    CommonFactor(String),
    #[error("zero form")]
    ZeroForm,
    #[error("Euler identity aX+bY+cZ=0 fails")]
    NotEuler,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("projective map is singular")]
    SingularMap,
    #[error("point is not singular")]
    NotSingular,
    #[error("common component suspected through the point (recursion cap reached)")]
    CommonComponent,
    #[error("no generic coordinates found after {0} attempts")]
    ShearExhausted(usize),
    #[error("classification precondition fails: {0}")]
    Precondition(String),
    /// A branch the classification theorem rules out; reaching it means a bug upstream.
    #[error("impossible case reached: {0}")]
    Impossible(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("search inconclusive: {0}")]
    Inconclusive(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
