//! Error bounds updated alongside CG: Gauss lower bound, Gauss-Radau upper
//! bound for a prescribed underestimate `mu` of the smallest eigenvalue,
//! the simple upper bound, improved delayed bounds and the adaptive
//! acceptance loop.

mod estimator;
mod improved;
mod recurrences;

pub use estimator::{
    read_bounds_csv, write_bounds_csv, BoundRecord, BoundSeries, BoundsRow, MuEstimator,
    BOUNDS_HEADER,
};
pub use improved::{
    adaptive_accept, delay_estimate, improved_bounds, write_acceptance_csv, Acceptance,
    AdaptiveAcceptor, Delay, ImprovedBound, ACCEPTANCE_HEADER, DEFAULT_TAU,
};
pub use recurrences::{
    bounds_at, gamma_from_alpha, update_alpha_mu, update_gamma_mu, update_phi, BoundTriple,
};

use thiserror::Error;

use crate::krylov::KrylovError;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("prescribed mu not below current Ritz value at iteration {k}; bound invalid from here")]
    MuNotBelowRitz { k: usize },
    #[error("nonpositive denominator in {what}")]
    NonPositiveDenominator { what: &'static str },
    #[error("records {ell}..={k} needed, trace has {available}")]
    MissingRecords { ell: usize, k: usize, available: usize },
    #[error("tau must be positive")]
    InvalidTau,
    #[error("malformed bounds CSV at line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Krylov(#[from] KrylovError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
