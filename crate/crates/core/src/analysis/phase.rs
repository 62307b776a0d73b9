//! Phase 1 / phase 2 classification and the per-iteration analysis report.
//!
//! Ratios whose denominator vanishes (a Ritz value landing on `lambda_1`)
//! are reported as `inf` or `NaN`; nothing here fails on them.

use std::io::Write;

use crate::bounds::BoundSeries;
use crate::krylov::CgTrace;
use crate::numerics::Real;

use super::spectral::{eta_breakdown_with, relative_distance};
use super::{AnalysisError, RitzCache};

pub const RELDIST_THRESHOLD: f64 = 0.5;

pub const ANALYSIS_HEADER: &str =
    "k,theta1,theta1_minus_lambda1,eta1,eta_max_index,eta_max,zeta,h_k,rho_k,reldist,phase";

/// First iteration of phase 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Onset {
    At(usize),
    Never,
}

impl std::fmt::Display for Onset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Onset::At(k) => write!(f, "{k}"),
            Onset::Never => f.write_str("never"),
        }
    }
}

/// First `k` with `theta_1^{(k)} - lambda_1 < lambda_1 - mu`.
///
/// `theta1[k]` is `theta_1^{(k)}`; `None` entries (such as `k = 0`) are
/// skipped.
pub fn phase2_onset_oracle(theta1: &[Option<Real>], lambda1: &Real, mu: &Real) -> Onset {
    let margin = lambda1 - mu;
    theta1
        .iter()
        .enumerate()
        .find(|(_, th)| th.as_ref().is_some_and(|th| (th - lambda1) < margin))
        .map_or(Onset::Never, |(k, _)| Onset::At(k))
}

/// Indices where the relative distance leaves and re-enters the "small"
/// region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Markers {
    /// Last index of the initial run with `reldist < threshold`.
    pub ell1: Option<usize>,
    /// First later index where `reldist < threshold` again.
    pub ell2: Option<usize>,
}

/// `reldist[k]` for `k = 0, 1, ...`.
pub fn phase2_markers_practical(reldist: &[Real], threshold: &Real) -> Markers {
    let small = |r: &Real| r < threshold;
    let run = reldist.iter().take_while(|r| small(r)).count();
    if run == 0 {
        return Markers { ell1: None, ell2: None };
    }
    let ell1 = run - 1;
    let ell2 = reldist
        .iter()
        .enumerate()
        .skip(run)
        .find(|(_, r)| small(r))
        .map(|(k, _)| k);
    Markers {
        ell1: Some(ell1),
        ell2,
    }
}

/// `rho_k = (theta_1^{(k+1)} - lambda_1) / (theta_1^{(k)} - lambda_1)` and
/// `h_k = (lambda_1 - mu) / (theta_1^{(k)} - lambda_1)`.
#[derive(Clone, Debug)]
pub struct ConvergenceRatios {
    pub rho: Vec<Option<Real>>,
    pub h: Vec<Option<Real>>,
}

/// Both series have one entry per `theta1` entry; `rho` needs the next one.
pub fn convergence_ratios(theta1: &[Option<Real>], lambda1: &Real, mu: &Real) -> ConvergenceRatios {
    let dist: Vec<Option<Real>> = theta1
        .iter()
        .map(|t| t.as_ref().map(|t| t - lambda1))
        .collect();
    let margin = lambda1 - mu;
    let h = dist.iter().map(|d| d.as_ref().map(|d| &margin / d)).collect();
    let rho = (0..dist.len())
        .map(|k| match (dist.get(k), dist.get(k + 1)) {
            (Some(Some(d)), Some(Some(dn))) => Some(dn / d),
            _ => None,
        })
        .collect();
    ConvergenceRatios { rho, h }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalysisMode {
    /// `lambda_1` (and possibly the whole spectrum) known.
    Oracle,
    /// Only quantities CG itself produces.
    Practical,
}

/// Spectral information that CG cannot see.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub lambda1: Real,
    /// Ascending eigenvalues of `A`, when available.
    pub eigenvalues: Option<Vec<Real>>,
}

#[derive(Clone, Debug)]
pub struct PhaseRow {
    pub k: usize,
    pub theta1: Option<Real>,
    pub theta1_minus_lambda1: Option<Real>,
    pub eta1: Option<Real>,
    /// 1-based, as in `eta_{i,k}`.
    pub eta_max_index: Option<usize>,
    pub eta_max: Option<Real>,
    pub zeta: Option<Real>,
    pub h_k: Option<Real>,
    pub rho_k: Option<Real>,
    pub reldist: Real,
    pub phase: Option<u8>,
}

#[derive(Clone, Debug)]
pub struct PhaseReport {
    pub label: String,
    pub mode: AnalysisMode,
    pub rows: Vec<PhaseRow>,
    pub onset: Option<Onset>,
    pub markers: Markers,
}

impl PhaseReport {
    pub fn reldist(&self) -> Vec<Real> {
        self.rows.iter().map(|r| r.reldist.clone()).collect()
    }
}

/// Builds the report for one `mu`. `cache` must cover `T_K`, `K` the trace
/// length (see [`RitzCache::from_trace`]).
pub fn analyze_series(
    trace: &CgTrace,
    series: &BoundSeries,
    cache: &RitzCache,
    oracle: Option<&Oracle>,
) -> Result<PhaseReport, AnalysisError> {
    let n = trace.len().min(series.len());
    if cache.max_order() < n {
        return Err(AnalysisError::MissingInput(format!(
            "Ritz data up to order {n} needed, have {}",
            cache.max_order()
        )));
    }
    let ctx = *cache.context();
    let mu = &series.mu;
    // theta1[k] for k = 0..=n; the last one only feeds rho.
    let mut theta1: Vec<Option<Real>> = vec![None];
    for k in 1..=n.min(cache.max_order()) {
        theta1.push(Some(cache.theta1(k)?.clone()));
    }
    let ratios = oracle.map(|o| convergence_ratios(&theta1, &o.lambda1, mu));

    let mut rows = Vec::with_capacity(n);
    for (k, b) in series.records.iter().enumerate().take(n) {
        let reldist = relative_distance(&b.phi, mu, &b.gamma_mu);
        let (mut eta1, mut eta_max_index, mut eta_max, mut zeta) = (None, None, None, None);
        if k >= 1 && k < cache.max_order() {
            let eig = cache.get(k)?;
            if mu < eig.smallest() {
                let t = cache.jacobi(k)?;
                let e = eta_breakdown_with(eig, &t, cache.beta(k)?, mu, &ctx)?;
                let (i, m) = e.max();
                eta1 = Some(e.etas[0].clone());
                eta_max_index = Some(i + 1);
                eta_max = Some(m.clone());
                zeta = Some(e.zeta);
            }
        }
        let th = theta1[k].clone();
        let (tml, h_k, rho_k, phase) = match (oracle, &ratios) {
            (Some(o), Some(r)) => {
                let tml = th.as_ref().map(|t| t - &o.lambda1);
                let phase = match &tml {
                    Some(d) if d < &(&o.lambda1 - mu) => 2,
                    _ => 1,
                };
                (tml, r.h[k].clone(), r.rho[k].clone(), Some(phase))
            }
            _ => (None, None, None, None),
        };
        rows.push(PhaseRow {
            k,
            theta1: th,
            theta1_minus_lambda1: tml,
            eta1,
            eta_max_index,
            eta_max,
            zeta,
            h_k,
            rho_k,
            reldist,
            phase,
        });
    }
    let onset = oracle.map(|o| phase2_onset_oracle(&theta1[..n], &o.lambda1, mu));
    let reldist: Vec<Real> = rows.iter().map(|r| r.reldist.clone()).collect();
    let markers = phase2_markers_practical(&reldist, &ctx.real(RELDIST_THRESHOLD));
    Ok(PhaseReport {
        label: series.label.clone(),
        mode: if oracle.is_some() {
            AnalysisMode::Oracle
        } else {
            AnalysisMode::Practical
        },
        rows,
        onset,
        markers,
    })
}

pub fn write_analysis_csv<W: Write>(
    mut out: W,
    report: &PhaseReport,
    digits: usize,
) -> std::io::Result<()> {
    let f = |x: &Option<Real>| x.as_ref().map(|v| v.to_decimal(digits)).unwrap_or_default();
    writeln!(out, "{ANALYSIS_HEADER}")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            f(&r.theta1),
            f(&r.theta1_minus_lambda1),
            f(&r.eta1),
            r.eta_max_index.map(|i| i.to_string()).unwrap_or_default(),
            f(&r.eta_max),
            f(&r.zeta),
            f(&r.h_k),
            f(&r.rho_k),
            r.reldist.to_decimal(digits),
            r.phase.map(|p| p.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}
