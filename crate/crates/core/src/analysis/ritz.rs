//! Accuracy of Ritz values and the gap between `alpha_{k+1}` and
//! `alpha_{k+1}^{(lambda_1)}`.

use crate::numerics::{EigenDecomposition, JacobiMatrix, PrecisionContext, Real};

use super::spectral::{eta_breakdown_with, lemma2_diff_with};
use super::AnalysisError;

/// Accuracy data of the Ritz value `theta_i^{(k)}`.
#[derive(Clone, Debug)]
pub struct RitzAccuracy {
    pub theta: Real,
    /// `beta_k |s_{k,i}|`, bounds the distance to the spectrum of `A`.
    pub residual: Real,
    /// `(beta_k s_{k,i} / theta_i)^2`
    pub relacc: Real,
    /// `lambda_1 / (theta_i - lambda_1)` for `i >= 2` (oracle mode).
    pub weight: Option<Real>,
    /// For `i = 1` in oracle mode: `(beta s_1)^2 / (lambda_N - lambda_1)`,
    /// a lower bound on `theta_1 - lambda_1`.
    pub gap_lower: Option<Real>,
    /// For `i = 1` in oracle mode with `theta_1 < lambda_2`:
    /// `(beta s_1)^2 / (lambda_2 - theta_1)`.
    pub gap_upper: Option<Real>,
}

/// `eigs_of_a` (ascending) switches on the oracle columns.
pub fn ritz_accuracy(
    eig: &EigenDecomposition,
    beta_k: &Real,
    eigs_of_a: Option<&[Real]>,
) -> Vec<RitzAccuracy> {
    eig.thetas
        .iter()
        .zip(&eig.last_components)
        .enumerate()
        .map(|(i, (th, s))| {
            let residual = (beta_k * s).abs();
            let relacc = (&residual / th).square();
            let (mut weight, mut gap_lower, mut gap_upper) = (None, None, None);
            if let Some(lam) = eigs_of_a {
                let l1 = &lam[0];
                if i == 0 {
                    let r2 = residual.square();
                    let spread = &lam[lam.len() - 1] - l1;
                    if spread.is_positive() {
                        gap_lower = Some(&r2 / &spread);
                    }
                    if lam.len() > 1 && th < &lam[1] {
                        gap_upper = Some(&r2 / &(&lam[1] - th));
                    }
                } else if th > l1 {
                    weight = Some(l1 / &(th - l1));
                }
            }
            RitzAccuracy {
                theta: th.clone(),
                residual,
                relacc,
                weight,
                gap_lower,
                gap_upper,
            }
        })
        .collect()
}

/// `lambda_2 - theta_1 <= (beta s_1)^2 / (theta_1 - lambda_1) <= lambda_N - lambda_1`.
///
/// Returns the three quantities, or `None` when `theta_1 <= lambda_1`.
pub fn bound1_sandwich(
    eig: &EigenDecomposition,
    beta_k: &Real,
    eigs_of_a: &[Real],
) -> Option<(Real, Real, Real)> {
    let th1 = eig.smallest();
    let l1 = &eigs_of_a[0];
    let gap = th1 - l1;
    if !gap.is_positive() || eigs_of_a.len() < 2 {
        return None;
    }
    let mid = (beta_k * &eig.last_components[0]).square() / &gap;
    Some((
        &eigs_of_a[1] - th1,
        mid,
        &eigs_of_a[eigs_of_a.len() - 1] - l1,
    ))
}

/// `alpha_{k+1} - alpha_{k+1}^{(lambda_1)}` computed three ways.
#[derive(Clone, Debug)]
pub struct AlphaGap {
    /// `alpha_{k+1}` of `T_{k+1}` minus `lambda_1 + zeta^{(lambda_1)}`.
    pub exact: Real,
    /// Shift-difference formula with `lambda = theta_1^{(k+1)}`.
    pub formula: Real,
    /// `eta_1^{(lambda_1)} rho_k / (1 - rho_k)`.
    pub prediction: Real,
    pub rho: Real,
}

/// `eig` decomposes `t = T_k`, `theta1_next` is `theta_1^{(k+1)}` and
/// `alpha_next` is `alpha_{k+1}`.
pub fn alpha_gap_exact(
    eig: &EigenDecomposition,
    t: &JacobiMatrix,
    beta_k: &Real,
    alpha_next: &Real,
    theta1_next: &Real,
    lambda1: &Real,
    ctx: &PrecisionContext,
) -> Result<AlphaGap, AnalysisError> {
    let at_l1 = eta_breakdown_with(eig, t, beta_k, lambda1, ctx)?;
    let exact = alpha_next - &at_l1.alpha_mu_next();
    let l2 = lemma2_diff_with(eig, t, beta_k, lambda1, theta1_next, ctx)?;
    let rho = (theta1_next - lambda1) / (eig.smallest() - lambda1);
    let prediction = &at_l1.etas[0] * &(&rho / &(rho.one_like() - &rho));
    Ok(AlphaGap {
        exact,
        formula: l2.alpha_diff_formula,
        prediction,
        rho,
    })
}
