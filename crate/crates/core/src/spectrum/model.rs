use crate::numerics::{eig_tridiagonal, ldl_solve, ldl_tridiagonal, JacobiMatrix, PrecisionContext, Real};

use super::{blur, rkpw, strakos_nodes, DistributionFunction, SpectrumError};

/// Parameters of the clustered Strakoš model problem.
///
/// Real-valued parameters are kept as decimal strings and parsed in the
/// working context, so `0.8` means the decimal 0.8 at every precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelParams {
    pub m: usize,
    pub lambda_first: String,
    pub lambda_last: String,
    pub rho: String,
    pub delta: String,
    pub p: usize,
}

impl ModelParams {
    /// `m = 12`, `1e-6 .. 1`, `rho = 0.8`, `delta = 1e-10`, `p = 4` (N = 30).
    pub fn reference() -> Self {
        Self {
            m: 12,
            lambda_first: "1e-6".into(),
            lambda_last: "1".into(),
            rho: "0.8".into(),
            delta: "1e-10".into(),
            p: 4,
        }
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::reference()
    }
}

/// The model linear system `A x = e_1`.
#[derive(Clone, Debug)]
pub struct ModelProblem {
    pub params: ModelParams,
    pub ctx: PrecisionContext,
    /// Blurred measure the problem was generated from.
    pub distribution: DistributionFunction,
    /// Jacobi matrix of the measure at full working precision.
    pub reference_t: JacobiMatrix,
    /// `reference_t` rounded entrywise to binary64.
    pub a: JacobiMatrix,
    pub b: Vec<Real>,
    /// Smallest eigenvalue of `a`, computed at working precision.
    pub lambda_min: Real,
    /// `a^{-1} e_1` at working precision.
    pub exact_solution: Vec<Real>,
}

impl ModelProblem {
    pub fn order(&self) -> usize {
        self.a.order()
    }
}

pub fn build_model_problem(
    params: &ModelParams,
    ctx: &PrecisionContext,
) -> Result<ModelProblem, SpectrumError> {
    let lam1 = ctx.parse(&params.lambda_first)?;
    let lamm = ctx.parse(&params.lambda_last)?;
    let rho = ctx.parse(&params.rho)?;
    let delta = ctx.parse(&params.delta)?;
    let nodes = strakos_nodes(params.m, &lam1, &lamm, &rho, ctx)?;
    let base = DistributionFunction::uniform(nodes, ctx)?;
    let distribution = blur(&base, &delta, params.p, ctx)?;
    let reference_t = rkpw(&distribution, ctx)?;
    let a = reference_t.to_native(ctx);
    let (lambda_min, exact_solution) = spectral_data(&a, ctx)?;
    let mut b = vec![ctx.zero(); a.order()];
    b[0] = ctx.one();
    Ok(ModelProblem {
        params: params.clone(),
        ctx: *ctx,
        distribution,
        reference_t,
        a,
        b,
        lambda_min,
        exact_solution,
    })
}

/// Smallest eigenvalue and `A^{-1} e_1` of a Jacobi matrix.
pub(crate) fn spectral_data(
    a: &JacobiMatrix,
    ctx: &PrecisionContext,
) -> Result<(Real, Vec<Real>), SpectrumError> {
    let lambda_min = eig_tridiagonal(a, ctx)?.thetas[0].clone();
    if !lambda_min.is_positive() {
        return Err(SpectrumError::InvalidParameter(
            "assembled matrix is not positive definite".into(),
        ));
    }
    let factors = ldl_tridiagonal(a, ctx)?;
    let mut e1 = vec![ctx.zero(); a.order()];
    e1[0] = ctx.one();
    Ok((lambda_min, ldl_solve(&factors, &e1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn without_blur_order_is_m() {
        let ctx = PrecisionContext::with_digits(32).unwrap();
        let params = ModelParams {
            p: 1,
            delta: "1e-30".into(),
            ..ModelParams::reference()
        };
        let problem = build_model_problem(&params, &ctx).unwrap();
        assert_eq!(problem.order(), 12);
    }

    #[test]
    fn native_image_is_binary64() {
        let ctx = PrecisionContext::with_digits(40).unwrap();
        let problem = build_model_problem(&ModelParams::reference(), &ctx).unwrap();
        assert_eq!(problem.order(), 30);
        for (a, t) in problem.a.alphas().iter().zip(problem.reference_t.alphas()) {
            assert_eq!(a.to_f64(), t.to_f64());
            assert_eq!(*a, a.to_native());
        }
        assert!(problem.lambda_min.is_positive());
    }
}
