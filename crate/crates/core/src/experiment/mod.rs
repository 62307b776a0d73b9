//! Experiment driver behind the `radau-cg` binary: configuration, problem
//! loading and the `model`, `solve`, `analyze`, `ingest` and `selftest`
//! commands. Every command writes plain files into the output directory.

mod commands;
mod config;
mod problem;
mod selftest;

pub use commands::{
    cmd_analyze, cmd_ingest, cmd_model, cmd_solve, resolve_mus, SolveSummary, ALPHA_FILE,
    MARKERS_FILE, MARKERS_HEADER, RITZ_HEADER, STATUS_HEADER,
};
pub use config::{ExperimentConfig, MuSpec, ProblemSource, RhsSpec};
pub use problem::{load_problem, read_vector, write_vector, Operator, Problem};
pub use selftest::{run_selftest, SelfCheck};

use std::path::PathBuf;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::bounds::BoundsError;
use crate::krylov::KrylovError;
use crate::numerics::NumericsError;
use crate::spectrum::SpectrumError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config{}: {message}", line.map(|l| format!(" line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error("{0} self-test check(s) failed")]
    Selftest(usize),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Krylov(#[from] KrylovError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
