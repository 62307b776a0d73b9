use crate::numerics::{vector, JacobiMatrix, PrecisionContext, Real};

use super::{DistributionFunction, SpectrumError};

/// Gragg-Harrod reconstruction of the Jacobi matrix of a discrete measure.
///
/// Nodes are absorbed one at a time; each step restores the tridiagonal form
/// with a sweep of plane rotations expressed directly on the recurrence
/// coefficients (the "rkpw" variant that works with squared off-diagonals).
/// The Gauss rule of the result (eigenvalues, squared first eigenvector
/// components) reproduces `dist`.
pub fn rkpw(
    dist: &DistributionFunction,
    ctx: &PrecisionContext,
) -> Result<JacobiMatrix, SpectrumError> {
    let n = dist.len();
    let nodes = dist.nodes();
    let weights = dist.weights();

    // alpha_k and beta_k^2, with beta_0^2 holding the total mass
    let mut alpha: Vec<Real> = nodes.iter().map(|x| ctx.round(x)).collect();
    let mut beta2: Vec<Real> = vec![ctx.zero(); n];
    beta2[0] = ctx.round(&weights[0]);

    for step in 0..n - 1 {
        let mut pn = ctx.round(&weights[step + 1]);
        let mut gam = ctx.one();
        let mut sig = ctx.zero();
        let mut t = ctx.zero();
        let lambda = &nodes[step + 1];
        for k in 0..=step + 1 {
            let rho = &beta2[k] + &pn;
            let tmp = &gam * &rho;
            let tsig = sig.clone();
            if rho.is_positive() {
                gam = &beta2[k] / &rho;
                sig = &pn / &rho;
            } else {
                gam = ctx.one();
                sig = ctx.zero();
            }
            let tk = &sig * (&alpha[k] - lambda) - &gam * &t;
            alpha[k] -= &tk - &t;
            t = tk;
            pn = if sig.is_positive() {
                t.square() / &sig
            } else {
                tsig * &beta2[k]
            };
            beta2[k] = tmp;
        }
    }

    let mut betas = Vec::with_capacity(n - 1);
    for (index, b2) in beta2.iter().enumerate().skip(1) {
        if !b2.is_positive() {
            return Err(SpectrumError::Breakdown { index: index - 1 });
        }
        betas.push(b2.sqrt());
    }
    Ok(JacobiMatrix::new(alpha, betas)?)
}

/// Lanczos on `diag(nodes)` with starting vector `sqrt(weights)`, fully
/// reorthogonalized twice per step.
///
/// Independent of [`rkpw`]; used to cross-check it.
pub fn lanczos_reconstruction(
    dist: &DistributionFunction,
    ctx: &PrecisionContext,
) -> Result<JacobiMatrix, SpectrumError> {
    let n = dist.len();
    let nodes: Vec<Real> = dist.nodes().iter().map(|x| ctx.round(x)).collect();
    let mut v: Vec<Real> = dist.weights().iter().map(|w| ctx.round(w).sqrt()).collect();
    let norm = vector::norm2(&v);
    v = vector::scale(&norm.recip(), &v);

    let mut basis: Vec<Vec<Real>> = vec![v.clone()];
    let mut alphas = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n.saturating_sub(1));
    let mut prev: Option<(Real, Vec<Real>)> = None;
    for k in 0..n {
        let mut w: Vec<Real> = nodes.iter().zip(&v).map(|(x, vi)| x * vi).collect();
        if let Some((beta, vprev)) = &prev {
            vector::axpy(&-beta, vprev, &mut w);
        }
        let alpha = vector::dot(&v, &w);
        vector::axpy(&-&alpha, &v, &mut w);
        for _ in 0..2 {
            for u in &basis {
                let h = vector::dot(u, &w);
                vector::axpy(&-h, u, &mut w);
            }
        }
        alphas.push(alpha);
        if k + 1 == n {
            break;
        }
        let beta = vector::norm2(&w);
        if !beta.is_positive() {
            return Err(SpectrumError::Breakdown { index: k });
        }
        let next = vector::scale(&beta.recip(), &w);
        betas.push(beta.clone());
        basis.push(next.clone());
        prev = Some((beta, std::mem::replace(&mut v, next)));
    }
    Ok(JacobiMatrix::new(alphas, betas)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eig_tridiagonal;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_digits(50).unwrap()
    }

    #[test]
    fn one_point_measure() {
        let c = ctx();
        let d = DistributionFunction::new(vec![c.int(5)], vec![c.one()], &c).unwrap();
        let t = rkpw(&d, &c).unwrap();
        assert_eq!(t.alphas(), &[c.int(5)]);
        assert!(t.betas().is_empty());
    }

    #[test]
    fn symmetric_two_point_measure() {
        let c = ctx();
        let d = DistributionFunction::new(
            vec![c.int(-1), c.one()],
            vec![c.ratio(1, 2), c.ratio(1, 2)],
            &c,
        )
        .unwrap();
        let t = rkpw(&d, &c).unwrap();
        assert!(t.alphas()[0].abs() < c.tolerance());
        assert!(t.alphas()[1].abs() < c.tolerance());
        assert!(t.betas()[0].rel_diff(&c.one()) < c.tolerance());
    }

    #[test]
    fn agrees_with_lanczos_and_recovers_rule() {
        let c = ctx();
        let nodes: Vec<Real> = [0.1, 0.3, 0.35, 1.0, 2.5, 4.0].iter().map(|&x| c.real(x)).collect();
        let raw: Vec<Real> = [1.0, 2.0, 0.5, 3.0, 1.5, 2.0].iter().map(|&x| c.real(x)).collect();
        let total: Real = raw.iter().cloned().sum();
        let weights: Vec<Real> = raw.iter().map(|w| w / &total).collect();
        let d = DistributionFunction::new(nodes.clone(), weights.clone(), &c).unwrap();
        let a = rkpw(&d, &c).unwrap();
        let b = lanczos_reconstruction(&d, &c).unwrap();
        let tol = c.tolerance_with_guard(12);
        for (x, y) in a.alphas().iter().zip(b.alphas()) {
            assert!(x.rel_diff(y) < tol);
        }
        for (x, y) in a.betas().iter().zip(b.betas()) {
            assert!(x.rel_diff(y) < tol);
        }
        let e = eig_tridiagonal(&a, &c).unwrap();
        for i in 0..nodes.len() {
            assert!(e.thetas[i].rel_diff(&nodes[i]) < tol);
            assert!((e.first_components[i].square() - &weights[i]).abs() < tol);
        }
    }
}
