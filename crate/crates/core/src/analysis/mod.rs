//! Spectral diagnostics over a completed CG run: the eta/zeta terms of the
//! modified coefficient, their sensitivity to `mu`, the spectral identity
//! for `gamma_k^(mu)`, phase detection and Ritz value accuracy.
//!
//! Index convention: row `k` of every report belongs to CG iteration `k`
//! and uses `T_k` (order `k`) with `beta_k = sqrt(delta_k) / gamma_{k-1}`.
//! Row 0 has no Ritz values.

mod cache;
mod phase;
mod ritz;
mod spectral;

pub use cache::RitzCache;
pub use phase::{
    analyze_series, convergence_ratios, phase2_markers_practical, phase2_onset_oracle,
    write_analysis_csv, AnalysisMode, ConvergenceRatios, Markers, Onset, Oracle, PhaseReport,
    PhaseRow, ANALYSIS_HEADER, RELDIST_THRESHOLD,
};
pub use ritz::{alpha_gap_exact, bound1_sandwich, ritz_accuracy, AlphaGap, RitzAccuracy};
pub use spectral::{
    crit1_bracket, eta_breakdown, eta_breakdown_with, lemma2_diff, neumann_identity_check,
    omega_identity_check, relative_distance, upper2, EtaBreakdown, Lemma2Diff,
};

use thiserror::Error;

use crate::bounds::BoundsError;
use crate::krylov::KrylovError;
use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("mu is not below the smallest Ritz value of T_{k}")]
    MuNotBelowRitz { k: usize },
    #[error("need mu <= lambda < theta_1, got {0}")]
    Ordering(String),
    #[error("no Ritz data for order {k} (available 1..={max})")]
    OrderOutOfRange { k: usize, max: usize },
    #[error("{0}")]
    MissingInput(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Krylov(#[from] KrylovError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
