//! Scalar recurrences behind the bounds.

use crate::numerics::Real;

use super::BoundsError;

/// `phi_{j+1} = 1 / (1 + delta_{j+1} / phi_j)`, with `phi_0 = 1`.
///
/// `phi_j = ||r_j||^2 / ||p_j||^2`.
pub fn update_phi(phi: &Real, delta_next: &Real) -> Real {
    (delta_next / phi + 1.0).recip()
}

pub(crate) fn gamma_mu_raw(gamma_mu: &Real, gamma: &Real, delta_next: &Real, mu: &Real) -> Real {
    let d = gamma_mu - gamma;
    let den = mu * &d + delta_next;
    d / den
}

/// `gamma_{j+1}^(mu)` from `gamma_j^(mu)`, `gamma_j` and `delta_{j+1}`.
/// The seed is `gamma_0^(mu) = 1/mu`.
///
/// Fails when `gamma_j^(mu) <= gamma_j`, which means `mu` is not below the
/// smallest Ritz value.
pub fn update_gamma_mu(
    gamma_mu: &Real,
    gamma: &Real,
    delta_next: &Real,
    mu: &Real,
) -> Result<Real, BoundsError> {
    if gamma_mu <= gamma {
        return Err(BoundsError::NonPositiveDenominator {
            what: "gamma^(mu) - gamma",
        });
    }
    Ok(gamma_mu_raw(gamma_mu, gamma, delta_next, mu))
}

/// `alpha_{j+1}^(mu) = mu + beta_j^2 / (alpha_j - alpha_j^(mu))`, seeded with
/// `alpha_1^(mu) = mu`.
pub fn update_alpha_mu(
    alpha_mu: &Real,
    alpha: &Real,
    beta2: &Real,
    mu: &Real,
) -> Result<Real, BoundsError> {
    if alpha <= alpha_mu {
        return Err(BoundsError::NonPositiveDenominator {
            what: "alpha - alpha^(mu)",
        });
    }
    Ok(beta2 / (alpha - alpha_mu) + mu)
}

/// `gamma_k^(mu) = 1 / (alpha_{k+1}^(mu) - delta_k / gamma_{k-1})`.
///
/// For `k = 0` pass `delta = 0` (any positive `gamma_prev`).
pub fn gamma_from_alpha(
    alpha_mu_next: &Real,
    delta: &Real,
    gamma_prev: &Real,
) -> Result<Real, BoundsError> {
    let den = alpha_mu_next - &(delta / gamma_prev);
    if !den.is_positive() {
        return Err(BoundsError::NonPositiveDenominator {
            what: "alpha^(mu) - delta/gamma",
        });
    }
    Ok(den.recip())
}

/// The three bounds of one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTriple {
    pub gauss_lower: Real,
    pub radau_upper: Real,
    pub simple_upper: Real,
}

/// `gamma_k ||r_k||^2 <= eps_k < gamma_k^(mu) ||r_k||^2 <= (phi_k/mu) ||r_k||^2`.
pub fn bounds_at(rnorm2: &Real, gamma: &Real, gamma_mu: &Real, phi: &Real, mu: &Real) -> BoundTriple {
    BoundTriple {
        gauss_lower: gamma * rnorm2,
        radau_upper: gamma_mu * rnorm2,
        simple_upper: phi / mu * rnorm2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eig_tridiagonal, JacobiMatrix, PrecisionContext};

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_digits(40).unwrap()
    }

    #[test]
    fn phi_steps() {
        let c = ctx();
        let phi = update_phi(&c.one(), &c.ratio(1, 2));
        assert!(phi.rel_diff(&c.ratio(2, 3)) < c.tolerance());
        assert_eq!(update_phi(&c.one(), &c.zero()), c.one());
        assert_eq!(update_phi(&phi, &c.zero()), c.one());
    }

    #[test]
    fn gamma_mu_step_and_cross_check() {
        let c = ctx();
        let mu = c.one();
        let g1 = update_gamma_mu(&c.one(), &c.ratio(1, 2), &c.ratio(1, 4), &mu).unwrap();
        assert!(g1.rel_diff(&c.ratio(2, 3)) < c.tolerance());
        // alpha route: alpha_1 = 2, beta_1^2 = 1
        let a2 = update_alpha_mu(&mu, &c.int(2), &c.one(), &mu).unwrap();
        assert!(a2.rel_diff(&c.int(2)) < c.tolerance());
        let g1b = gamma_from_alpha(&a2, &c.ratio(1, 4), &c.ratio(1, 2)).unwrap();
        assert!(g1b.rel_diff(&g1) < c.tolerance());
        // seed
        let g0 = gamma_from_alpha(&mu, &c.zero(), &c.one()).unwrap();
        assert_eq!(g0, mu.recip());
    }

    #[test]
    fn prescribed_eigenvalue_two_by_two() {
        let c = ctx();
        let t = JacobiMatrix::new(vec![c.int(2), c.int(2)], vec![c.one()]).unwrap();
        let e = eig_tridiagonal(&t, &c).unwrap();
        assert!(e.thetas[0].rel_diff(&c.one()) < c.tolerance());
    }

    #[test]
    fn diagnostics_on_bad_order() {
        let c = ctx();
        assert!(update_gamma_mu(&c.one(), &c.one(), &c.one(), &c.one()).is_err());
        assert!(update_alpha_mu(&c.int(2), &c.one(), &c.one(), &c.one()).is_err());
        assert!(gamma_from_alpha(&c.one(), &c.int(2), &c.one()).is_err());
    }

    #[test]
    fn identity_bounds_at_start() {
        let c = ctx();
        let b = bounds_at(&c.one(), &c.one(), &c.one(), &c.one(), &c.one());
        assert_eq!(b.gauss_lower, c.one());
        assert_eq!(b.radau_upper, b.simple_upper);
    }
}
