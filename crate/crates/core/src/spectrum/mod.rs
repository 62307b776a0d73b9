//! Discrete measures and their Jacobi matrices: the Strakoš spectrum, the
//! clustered ("blurred") variant, Gragg-Harrod reconstruction and the
//! assembled model problem.

mod distribution;
pub mod io;
mod model;
mod rkpw;

pub use distribution::{blur, cluster_sizes, strakos_nodes, DistributionFunction};
pub use model::{build_model_problem, ModelParams, ModelProblem};
pub use rkpw::{lanczos_reconstruction, rkpw};

use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("nodes are not strictly increasing at index {index}")]
    NonMonotoneNodes { index: usize },
    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("weights sum to {sum}, expected 1")]
    WeightSum { sum: String },
    #[error("clusters {left} and {right} overlap; delta must be below half the node gap")]
    OverlappingClusters { left: usize, right: usize },
    #[error("reconstruction broke down at beta {index} (nonpositive); retry with more digits")]
    Breakdown { index: usize },
    #[error("malformed {what} at line {line}: {message}")]
    Format {
        what: &'static str,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
