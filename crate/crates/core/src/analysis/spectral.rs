//! Spectral expressions of the modified coefficient `alpha_{k+1}^(mu)`.
//!
//! With `T_k = S diag(theta) S^T` and `s_i` the last row of `S`,
//! `eta_i = (beta_k s_i)^2 / (theta_i - mu)` and `zeta = sum_i eta_i`, so
//! that `alpha_{k+1}^(mu) = mu + zeta`.

use crate::numerics::{eig_tridiagonal, solve_shifted, EigenDecomposition, JacobiMatrix, PrecisionContext, Real};

use super::AnalysisError;

#[derive(Clone, Debug)]
pub struct EtaBreakdown {
    pub mu: Real,
    /// In the order of the ascending Ritz values.
    pub etas: Vec<Real>,
    /// `sum_i eta_i`
    pub zeta: Real,
    /// `beta_k^2 e_k^T (T_k - mu I)^{-1} e_k`, computed without the
    /// eigendecomposition.
    pub zeta_direct: Real,
}

impl EtaBreakdown {
    /// `alpha_{k+1}^(mu) = mu + zeta`
    pub fn alpha_mu_next(&self) -> Real {
        &self.mu + &self.zeta
    }

    /// Index (0-based) and value of the largest term.
    pub fn max(&self) -> (usize, &Real) {
        self.etas
            .iter()
            .enumerate()
            .fold((0, &self.etas[0]), |best, (i, e)| if e > best.1 { (i, e) } else { best })
    }

    /// Relative gap between the two ways of computing `zeta`.
    pub fn branch_gap(&self) -> Real {
        self.zeta.rel_diff(&self.zeta_direct)
    }
}

fn last_unit(n: usize, ctx: &PrecisionContext) -> Vec<Real> {
    let mut e = vec![ctx.zero(); n];
    e[n - 1] = ctx.one();
    e
}

/// Both routes to `zeta_k^(mu)`; fails unless `mu < theta_1^{(k)}`.
pub fn eta_breakdown(
    t: &JacobiMatrix,
    beta_k: &Real,
    mu: &Real,
    ctx: &PrecisionContext,
) -> Result<EtaBreakdown, AnalysisError> {
    let eig = eig_tridiagonal(t, ctx)?;
    eta_breakdown_with(&eig, t, beta_k, mu, ctx)
}

/// [`eta_breakdown`] reusing a decomposition of `t`.
pub fn eta_breakdown_with(
    eig: &EigenDecomposition,
    t: &JacobiMatrix,
    beta_k: &Real,
    mu: &Real,
    ctx: &PrecisionContext,
) -> Result<EtaBreakdown, AnalysisError> {
    let k = t.order();
    if mu >= eig.smallest() {
        return Err(AnalysisError::MuNotBelowRitz { k });
    }
    let etas: Vec<Real> = eig
        .thetas
        .iter()
        .zip(&eig.last_components)
        .map(|(th, s)| (beta_k * s).square() / (th - mu))
        .collect();
    let zeta: Real = etas.iter().cloned().sum();
    let y = solve_shifted(t, mu, &last_unit(k, ctx), ctx)
        .map_err(|_| AnalysisError::MuNotBelowRitz { k })?;
    let zeta_direct = beta_k.square() * &y[k - 1];
    Ok(EtaBreakdown {
        mu: mu.clone(),
        etas,
        zeta,
        zeta_direct,
    })
}

/// Sensitivity of the eta terms between two shifts `mu <= lambda`.
#[derive(Clone, Debug)]
pub struct Lemma2Diff {
    /// Measured `(eta_i^(lambda) - eta_i^(mu)) / eta_i^(mu)`.
    pub growth: Vec<Real>,
    /// `(lambda - mu) / (theta_i - lambda)`
    pub predicted_growth: Vec<Real>,
    /// `alpha^(lambda) - alpha^(mu)` from two breakdowns.
    pub alpha_diff: Real,
    /// `(lambda-mu)/(theta_1-mu) eta_1^(lambda) + (lambda-mu) E^(lambda,mu)`
    pub alpha_diff_formula: Real,
    /// `E^(lambda,mu) = 1 + sum_{i>=2} eta_i^(lambda) / (theta_i - mu)`
    pub e_lambda_mu: Real,
    /// `E^(mu,lambda)`
    pub e_mu_lambda: Real,
}

pub fn lemma2_diff(
    t: &JacobiMatrix,
    beta_k: &Real,
    mu: &Real,
    lambda: &Real,
    ctx: &PrecisionContext,
) -> Result<Lemma2Diff, AnalysisError> {
    let eig = eig_tridiagonal(t, ctx)?;
    lemma2_diff_with(&eig, t, beta_k, mu, lambda, ctx)
}

pub(crate) fn lemma2_diff_with(
    eig: &EigenDecomposition,
    t: &JacobiMatrix,
    beta_k: &Real,
    mu: &Real,
    lambda: &Real,
    ctx: &PrecisionContext,
) -> Result<Lemma2Diff, AnalysisError> {
    if mu > lambda || lambda >= eig.smallest() {
        return Err(AnalysisError::Ordering(format!(
            "mu = {}, lambda = {}, theta_1 = {}",
            mu.to_decimal(12),
            lambda.to_decimal(12),
            eig.smallest().to_decimal(12)
        )));
    }
    let at_mu = eta_breakdown_with(eig, t, beta_k, mu, ctx)?;
    let at_lambda = eta_breakdown_with(eig, t, beta_k, lambda, ctx)?;
    let d = lambda - mu;
    let growth = at_lambda
        .etas
        .iter()
        .zip(&at_mu.etas)
        .map(|(l, m)| (l - m) / m)
        .collect();
    let predicted_growth = eig.thetas.iter().map(|th| &d / &(th - lambda)).collect();
    let e_of = |etas: &[Real], shift: &Real| -> Real {
        let mut e = ctx.one();
        for (eta, th) in etas.iter().zip(&eig.thetas).skip(1) {
            e += eta / &(th - shift);
        }
        e
    };
    let e_lambda_mu = e_of(&at_lambda.etas, mu);
    let e_mu_lambda = e_of(&at_mu.etas, lambda);
    let theta1 = eig.smallest();
    let alpha_diff_formula = &d / &(theta1 - mu) * &at_lambda.etas[0] + &d * &e_lambda_mu;
    Ok(Lemma2Diff {
        growth,
        predicted_growth,
        alpha_diff: at_lambda.alpha_mu_next() - at_mu.alpha_mu_next(),
        alpha_diff_formula,
        e_lambda_mu,
        e_mu_lambda,
    })
}

/// Relative gap in
/// `1/gamma_k^(mu) = mu/phi_k + sum_i (mu/theta_i)^2 eta_i^(mu)`.
pub fn omega_identity_check(
    eta: &EtaBreakdown,
    eig: &EigenDecomposition,
    phi_k: &Real,
    gamma_mu: &Real,
) -> Real {
    let mu = &eta.mu;
    let mut rhs = mu / phi_k;
    for (th, e) in eig.thetas.iter().zip(&eta.etas) {
        rhs += (mu / th).square() * e;
    }
    let lhs = gamma_mu.recip();
    (&lhs - &rhs).abs() / lhs.abs()
}

/// Relative gap in
/// `e_k^T (T_k - mu)^{-1} e_k = gamma_{k-1} + mu gamma_{k-1}^2 / phi_{k-1}
///  + sum_i (mu/theta_i)^2 s_i^2 / (theta_i - mu)`.
pub fn neumann_identity_check(
    t: &JacobiMatrix,
    eig: &EigenDecomposition,
    mu: &Real,
    gamma_prev: &Real,
    phi_prev: &Real,
    ctx: &PrecisionContext,
) -> Result<Real, AnalysisError> {
    let k = t.order();
    let y = solve_shifted(t, mu, &last_unit(k, ctx), ctx)
        .map_err(|_| AnalysisError::MuNotBelowRitz { k })?;
    let lhs = y[k - 1].clone();
    let mut rhs = gamma_prev + &(mu * &gamma_prev.square() / phi_prev);
    for (th, s) in eig.thetas.iter().zip(&eig.last_components) {
        rhs += (mu / th).square() * &s.square() / &(th - mu);
    }
    Ok((&lhs - &rhs).abs() / lhs.abs())
}

/// `(phi_k/mu - gamma_k^(mu)) / gamma_k^(mu)`
pub fn relative_distance(phi_k: &Real, mu: &Real, gamma_mu: &Real) -> Real {
    (phi_k / mu - gamma_mu) / gamma_mu
}

/// `(mu/theta_1)^2 eta_1/mu + sum_{i>=2} (beta s_i / theta_i)^2 mu/(theta_i - mu)`;
/// `relative_distance = phi_k` times this.
pub fn crit1_bracket(eta: &EtaBreakdown, eig: &EigenDecomposition, beta_k: &Real) -> Real {
    let mu = &eta.mu;
    let th1 = &eig.thetas[0];
    let mut sum = (mu / th1).square() * &eta.etas[0] / mu;
    for (th, s) in eig.thetas.iter().zip(&eig.last_components).skip(1) {
        sum += (beta_k * s / th).square() * &(mu / &(th - mu));
    }
    sum
}

/// The bracket of [`crit1_bracket`] with `mu` replaced by `lambda_1` in the
/// outer factors (`eta_1` keeps `mu`).
pub fn upper2(eta: &EtaBreakdown, eig: &EigenDecomposition, beta_k: &Real, lambda1: &Real) -> Real {
    let th1 = &eig.thetas[0];
    let mut sum = (lambda1 / th1).square() * &eta.etas[0] / &eta.mu;
    for (th, s) in eig.thetas.iter().zip(&eig.last_components).skip(1) {
        sum += (beta_k * s / th).square() * &(lambda1 / &(th - lambda1));
    }
    sum
}
