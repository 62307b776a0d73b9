//! Improved Gauss-Radau bounds `Omega_{l:k}` and the adaptive loop that
//! decides when the bound for an earlier iteration `l` is accurate enough.

use std::io::Write;

use crate::krylov::CgTrace;
use crate::numerics::Real;

use super::{BoundSeries, BoundsError};

pub const DEFAULT_TAU: f64 = 0.25;

pub const ACCEPTANCE_HEADER: &str = "ell,k,omega,delta_lk,criterion_value";

/// `Omega_{l:k}` and the lower bound `Delta_{l:k}` for `eps_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImprovedBound {
    pub omega: Real,
    pub delta_lk: Real,
}

/// `sum_{j=from}^{to} gamma_j ||r_j||^2`, summed directly.
fn partial_sum(trace: &CgTrace, from: usize, to: usize) -> Option<Real> {
    trace.records()[from..=to]
        .iter()
        .map(|r| &r.gamma * &r.rnorm2)
        .reduce(|a, b| a + b)
}

fn check_range(trace: &CgTrace, series: &BoundSeries, ell: usize, k: usize) -> Result<(), BoundsError> {
    let available = trace.len().min(series.len());
    if ell > k || k >= available {
        return Err(BoundsError::MissingRecords { ell, k, available });
    }
    Ok(())
}

/// `Omega_{l:k} = Delta_{l:k-1} + gamma_k^(mu) ||r_k||^2`,
/// `Delta_{l:k} = sum_{j=l}^{k} gamma_j ||r_j||^2`.
pub fn improved_bounds(
    trace: &CgTrace,
    series: &BoundSeries,
    ell: usize,
    k: usize,
) -> Result<ImprovedBound, BoundsError> {
    check_range(trace, series, ell, k)?;
    let radau = &series.records[k].radau_upper;
    let omega = match k.checked_sub(1).filter(|&km1| km1 >= ell) {
        Some(km1) => partial_sum(trace, ell, km1).expect("nonempty range") + radau,
        None => radau.clone(),
    };
    let delta_lk = partial_sum(trace, ell, k).expect("nonempty range");
    Ok(ImprovedBound { omega, delta_lk })
}

/// An accepted improved bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Acceptance {
    pub ell: usize,
    pub k: usize,
    pub omega: Real,
    pub delta_lk: Real,
    /// `||r_k||^2 (gamma_k^(mu) - gamma_k) / Delta_{l:k}`, at most `tau`.
    pub criterion_value: Real,
}

/// Online form of the acceptance loop: call [`AdaptiveAcceptor::observe`]
/// after each CG iteration.
#[derive(Clone, Debug)]
pub struct AdaptiveAcceptor {
    tau: Real,
    ell: usize,
    accepted: Vec<Acceptance>,
}

impl AdaptiveAcceptor {
    pub fn new(tau: Real) -> Result<Self, BoundsError> {
        if !tau.is_positive() {
            return Err(BoundsError::InvalidTau);
        }
        Ok(Self {
            tau,
            ell: 0,
            accepted: Vec::new(),
        })
    }

    /// Next iteration whose error is still waiting for a bound.
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn accepted(&self) -> &[Acceptance] {
        &self.accepted
    }

    pub fn into_accepted(self) -> Vec<Acceptance> {
        self.accepted
    }

    /// Processes iteration `k` and returns what it accepted.
    ///
    /// Untrusted estimator output is never accepted.
    pub fn observe(
        &mut self,
        trace: &CgTrace,
        series: &BoundSeries,
        k: usize,
    ) -> Result<&[Acceptance], BoundsError> {
        check_range(trace, series, k, k)?;
        let start = self.accepted.len();
        let bound = &series.records[k];
        if !bound.trusted {
            return Ok(&self.accepted[start..]);
        }
        let rec = &trace.records()[k];
        let gap = &rec.rnorm2 * &(&bound.gamma_mu - &rec.gamma);
        while k >= self.ell {
            let delta_lk = partial_sum(trace, self.ell, k).expect("nonempty range");
            let criterion_value = &gap / &delta_lk;
            if criterion_value > self.tau {
                break;
            }
            let omega = match k.checked_sub(1).filter(|&km1| km1 >= self.ell) {
                Some(km1) => partial_sum(trace, self.ell, km1).expect("nonempty range") + &bound.radau_upper,
                None => bound.radau_upper.clone(),
            };
            self.accepted.push(Acceptance {
                ell: self.ell,
                k,
                omega,
                delta_lk,
                criterion_value,
            });
            self.ell += 1;
        }
        Ok(&self.accepted[start..])
    }
}

/// Offline acceptance loop over a completed trace.
pub fn adaptive_accept(
    trace: &CgTrace,
    series: &BoundSeries,
    tau: &Real,
) -> Result<Vec<Acceptance>, BoundsError> {
    let mut acc = AdaptiveAcceptor::new(tau.clone())?;
    for k in 0..trace.len().min(series.len()) {
        acc.observe(trace, series, k)?;
    }
    Ok(acc.into_accepted())
}

pub fn write_acceptance_csv<W: Write>(
    mut out: W,
    accepted: &[Acceptance],
    digits: usize,
) -> std::io::Result<()> {
    writeln!(out, "{ACCEPTANCE_HEADER}")?;
    for a in accepted {
        writeln!(
            out,
            "{},{},{},{},{}",
            a.ell,
            a.k,
            a.omega.to_decimal(digits),
            a.delta_lk.to_decimal(digits),
            a.criterion_value.to_decimal(digits)
        )?;
    }
    Ok(())
}

/// How many extra iterations the basic Gauss-Radau bound needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Delay {
    Found(usize),
    Undetermined,
}

/// Smallest `j >= 0` with `gamma_{l+j+1}^(mu) ||r_{l+j+1}||^2 < eps_l`.
///
/// `eps_l` is the true error when the trace has it, otherwise its lower
/// bound `Delta_{l:k}` with `k` the last iteration.
pub fn delay_estimate(series: &BoundSeries, trace: &CgTrace, ell: usize) -> Delay {
    let n = trace.len().min(series.len());
    if ell >= n {
        return Delay::Undetermined;
    }
    let target = match &trace.records()[ell].true_err2 {
        Some(e) => e.clone(),
        None => partial_sum(trace, ell, n - 1).expect("nonempty range"),
    };
    (ell + 1..n)
        .find(|&i| series.records[i].radau_upper < target)
        .map_or(Delay::Undetermined, |i| Delay::Found(i - ell - 1))
}
