//! Lanczos and conjugate gradients at configurable precision, the bridge
//! between their recurrence coefficients, and true-error tracking.

mod cg;
mod lanczos;
pub mod matrix_market;
mod operator;
pub mod trace;

pub use cg::{cg_step, cg_to_lanczos, true_error2, CgState, ConjugateGradient};
pub use lanczos::{lanczos_step, LanczosState};
pub use operator::{LinearOperator, SparseSymmetric};
pub use trace::{CgRecord, CgTrace};

use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum KrylovError {
    #[error("matrix not SPD: p^T A p = {value} at iteration {k}")]
    NotSpd { k: usize, value: String },
    #[error("residual is exactly zero at iteration {k}; CG has terminated")]
    ZeroResidual { k: usize },
    #[error("Lanczos already reached the grade of the starting vector at step {k}")]
    GradeReached { k: usize },
    #[error("starting vector is zero")]
    ZeroStart,
    #[error("dimension mismatch: operator has order {expected}, vector has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("trace has {available} iterations, {needed} required")]
    ShortTrace { needed: usize, available: usize },
    #[error("nonpositive CG coefficient {name} at index {index}")]
    NonPositiveCoefficient { name: &'static str, index: usize },
    #[error("matrix market line {line}: {message}")]
    MatrixMarket { line: usize, message: String },
    #[error("malformed trace CSV at line {line}: {message}")]
    TraceFormat { line: usize, message: String },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
