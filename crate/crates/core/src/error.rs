use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numeric modules of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("point {0} lies outside the open unit disk")]
    OutsideDisk(Complex64),

    #[error("norm/compactness criteria unavailable at truncation: sup |phi| = {0} >= 1")]
    SupBoundAtLeastOne(f64),

    #[error("degenerate linear-fractional map: {0}")]
    DegenerateMap(String),

    #[error("truncation mismatch: need at least order {expected}, got {got}")]
    TruncationMismatch { expected: usize, got: usize },

    #[error("no closed form in paper for this symbol family: {0}")]
    NoClosedForm(String),

    #[error("power iteration failed to converge after {0} iterations")]
    NonConvergence(usize),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("candidate eigenvalue must be non-zero")]
    ZeroEigenvalue,

    #[error("non-finite integrand sample at z = {0}")]
    NonFiniteSample(Complex64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
