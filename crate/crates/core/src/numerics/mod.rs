//! Scalar arithmetic at configurable precision and dense symmetric
//! tridiagonal linear algebra.

mod real;
mod tridiag;
pub mod vector;

pub use real::{PrecisionContext, Real, MAX_DIGITS, MIN_DIGITS, NATIVE_BITS};
pub use tridiag::{
    eig_tridiagonal, eig_tridiagonal_full, ldl_solve, ldl_tridiagonal, solve_shifted,
    EigenDecomposition, JacobiMatrix, LdlFactors,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("decimal digits must be 0 (native) or within {MIN_DIGITS}..={MAX_DIGITS}, got {0}")]
    InvalidDigits(u32),
    #[error("cannot parse {0:?} as a real number")]
    Parse(String),
    #[error("empty matrix")]
    Empty,
    #[error("tridiagonal shape mismatch: {alphas} diagonal vs {betas} off-diagonal entries")]
    ShapeMismatch { alphas: usize, betas: usize },
    #[error("off-diagonal entry {index} is not positive")]
    NonPositiveBeta { index: usize },
    #[error("vector length {found} does not match matrix order {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("QL iteration did not converge for eigenvalue {index} within {cap} sweeps")]
    NoConvergence { index: usize, cap: usize },
    #[error("shift not below spectrum: pivot {index} of T - mu I is nonpositive")]
    ShiftNotBelowSpectrum { index: usize },
    #[error("matrix not positive definite: pivot {index} is nonpositive")]
    NotPositiveDefinite { index: usize },
}
