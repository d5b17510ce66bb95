//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the algebraic models and the verification runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("signature mismatch: ({0},{1}) vs ({2},{3})")]
    SignatureMismatch(usize, usize, usize, usize),
    #[error("invalid signature ({p},{q}): p+q must be at least 1")]
    InvalidSignature { p: usize, q: usize },
    #[error("matrix is not nilpotent within bound {bound}: power {bound} is nonzero")]
    NotNilpotent { bound: u32 },
    #[error("matrix exponential overflowed")]
    Overflow,
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("matrix is not orthogonal for the {0} form")]
    NotOrthogonal(&'static str),
    #[error("matrix does not lie in {0}")]
    NotInAlgebra(&'static str),
    #[error("singular matrix where an invertible one is required")]
    Singular,
    #[error("|det B| = {0} is not a rational square; use the float path")]
    NotPerfectSquare(String),
    #[error("zero element where a nonzero one is required")]
    ZeroElement,
    #[error("span matrix is not a point of the model: {0}")]
    InvalidPoint(String),
    #[error("element does not lie in the negative part")]
    NotNegative,
    #[error("lift system is inconsistent")]
    InconsistentLift,
    #[error("S-tensor vanishes identically")]
    DegenerateTensor,
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
