use crate::numerics::{vector, JacobiMatrix, PrecisionContext, Real};

use super::{CgRecord, CgTrace, KrylovError, LinearOperator};

/// CG iterate `k`: `x_k`, `r_k`, `p_k`, `gamma_{k-1}`, `delta_k`, `||r_k||^2`.
#[derive(Clone, Debug)]
pub struct CgState {
    pub k: usize,
    pub x: Vec<Real>,
    pub r: Vec<Real>,
    pub p: Vec<Real>,
    /// `gamma_{k-1}`; absent at `k = 0`.
    pub gamma_prev: Option<Real>,
    /// `delta_k`; zero at `k = 0`.
    pub delta: Real,
    pub rnorm2: Real,
}

impl CgState {
    /// Starting state for `A x = b` with `x_0 = 0`.
    pub fn initial(b: &[Real], ctx: &PrecisionContext) -> Result<Self, KrylovError> {
        if b.is_empty() {
            return Err(KrylovError::ZeroStart);
        }
        let r: Vec<Real> = b.iter().map(|v| ctx.round(v)).collect();
        let rnorm2 = vector::norm2_squared(&r);
        if rnorm2.is_zero() {
            return Err(KrylovError::ZeroStart);
        }
        Ok(Self {
            k: 0,
            x: vec![ctx.zero(); b.len()],
            p: r.clone(),
            r,
            gamma_prev: None,
            delta: ctx.zero(),
            rnorm2,
        })
    }
}

/// One CG iteration, `k-1 -> k`.
pub fn cg_step<Op: LinearOperator + ?Sized>(
    state: CgState,
    op: &Op,
) -> Result<CgState, KrylovError> {
    if state.x.len() != op.dim() {
        return Err(KrylovError::DimensionMismatch {
            expected: op.dim(),
            found: state.x.len(),
        });
    }
    if state.rnorm2.is_zero() {
        return Err(KrylovError::ZeroResidual { k: state.k });
    }
    let ap = op.apply(&state.p);
    let pap = vector::dot(&state.p, &ap);
    if !pap.is_positive() {
        return Err(KrylovError::NotSpd {
            k: state.k,
            value: pap.to_decimal(17),
        });
    }
    let gamma = &state.rnorm2 / &pap;
    let CgState { k, mut x, mut r, p, rnorm2, .. } = state;
    vector::axpy(&gamma, &p, &mut x);
    vector::axpy(&-&gamma, &ap, &mut r);
    let rnorm2_next = vector::norm2_squared(&r);
    let delta = &rnorm2_next / &rnorm2;
    let mut p_next = r.clone();
    vector::axpy(&delta, &p, &mut p_next);
    Ok(CgState {
        k: k + 1,
        x,
        r,
        p: p_next,
        gamma_prev: Some(gamma),
        delta,
        rnorm2: rnorm2_next,
    })
}

/// `(x - x_k)^T A (x - x_k)`
pub fn true_error2<Op: LinearOperator + ?Sized>(x_k: &[Real], exact: &[Real], op: &Op) -> Real {
    let e = vector::sub(exact, x_k);
    let ae = op.apply(&e);
    vector::dot(&e, &ae)
}

/// `T_k` assembled from `gamma_0..gamma_{k-1}` and `delta_1..delta_{k-1}`.
pub fn cg_to_lanczos(trace: &CgTrace, k: usize) -> Result<JacobiMatrix, KrylovError> {
    if k == 0 || k > trace.len() {
        return Err(KrylovError::ShortTrace {
            needed: k.max(1),
            available: trace.len(),
        });
    }
    let recs = trace.records();
    for (j, r) in recs[..k].iter().enumerate() {
        if !r.gamma.is_positive() {
            return Err(KrylovError::NonPositiveCoefficient { name: "gamma", index: j });
        }
        if j > 0 && !r.delta.is_positive() {
            return Err(KrylovError::NonPositiveCoefficient { name: "delta", index: j });
        }
    }
    let mut alphas = Vec::with_capacity(k);
    let mut betas = Vec::with_capacity(k - 1);
    alphas.push(recs[0].gamma.recip());
    for j in 1..k {
        let (prev, cur) = (&recs[j - 1], &recs[j]);
        betas.push(cur.delta.sqrt() / &prev.gamma);
        alphas.push(cur.gamma.recip() + &cur.delta / &prev.gamma);
    }
    Ok(JacobiMatrix::new(alphas, betas)?)
}

/// CG driver that records one [`CgRecord`] per completed iteration.
///
/// Record `k` needs `gamma_k`, so it is emitted by the step `k -> k+1`.
pub struct ConjugateGradient<'a, Op: LinearOperator + ?Sized> {
    op: &'a Op,
    state: CgState,
    exact: Option<Vec<Real>>,
    trace: CgTrace,
    residuals: Option<Vec<Vec<Real>>>,
}

impl<'a, Op: LinearOperator + ?Sized> ConjugateGradient<'a, Op> {
    pub fn new(op: &'a Op, b: &[Real], ctx: &PrecisionContext) -> Result<Self, KrylovError> {
        if b.len() != op.dim() {
            return Err(KrylovError::DimensionMismatch {
                expected: op.dim(),
                found: b.len(),
            });
        }
        Ok(Self {
            op,
            state: CgState::initial(b, ctx)?,
            exact: None,
            trace: CgTrace::new(),
            residuals: None,
        })
    }

    /// Enables `true_err2` in the records.
    pub fn with_exact_solution(mut self, x: Vec<Real>) -> Self {
        self.exact = Some(x);
        self
    }

    /// Keeps `r_0, r_1, ...`.
    pub fn retain_residuals(mut self) -> Self {
        self.residuals = Some(vec![self.state.r.clone()]);
        self
    }

    pub fn state(&self) -> &CgState {
        &self.state
    }

    pub fn trace(&self) -> &CgTrace {
        &self.trace
    }

    pub fn into_trace(self) -> CgTrace {
        self.trace
    }

    pub fn residuals(&self) -> Option<&[Vec<Real>]> {
        self.residuals.as_deref()
    }

    /// Error of the current iterate, if the exact solution is known.
    pub fn current_error2(&self) -> Option<Real> {
        self.exact
            .as_ref()
            .map(|x| true_error2(&self.state.x, x, self.op))
    }

    /// Advances one iteration and returns the record of the iterate just left.
    pub fn step(&mut self) -> Result<&CgRecord, KrylovError> {
        let err = self.current_error2();
        let next = cg_step(self.state.clone(), self.op)?;
        let prev = std::mem::replace(&mut self.state, next);
        if let Some(res) = &mut self.residuals {
            res.push(self.state.r.clone());
        }
        self.trace.push(CgRecord {
            k: prev.k,
            gamma: self.state.gamma_prev.clone().expect("set by cg_step"),
            delta: prev.delta,
            rnorm2: prev.rnorm2,
            true_err2: err,
            theta1: None,
        });
        Ok(self.trace.records().last().expect("just pushed"))
    }

    /// Runs `iterations` steps; stops early on an exactly zero residual.
    pub fn run(&mut self, iterations: usize) -> Result<(), KrylovError> {
        for _ in 0..iterations {
            match self.step() {
                Ok(_) => {}
                Err(KrylovError::ZeroResidual { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::SparseSymmetric;

    fn diag(ctx: &PrecisionContext, d: &[f64]) -> SparseSymmetric {
        SparseSymmetric::from_triplets(
            d.len(),
            d.iter().enumerate().map(|(i, &x)| (i, i, ctx.real(x))).collect(),
        )
    }

    #[test]
    fn identity_converges_in_one_step() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let a = diag(&ctx, &[1.0, 1.0]);
        let b = vec![ctx.int(3), ctx.int(-2)];
        let s = cg_step(CgState::initial(&b, &ctx).unwrap(), &a).unwrap();
        assert_eq!(s.x, b);
        assert!(s.rnorm2.is_zero());
        assert!(matches!(cg_step(s, &a), Err(KrylovError::ZeroResidual { k: 1 })));
    }

    #[test]
    fn first_gamma_on_diagonal() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let a = diag(&ctx, &[1.0, 2.0]);
        let mut cg = ConjugateGradient::new(&a, &[ctx.one(), ctx.one()], &ctx).unwrap();
        let rec = cg.step().unwrap();
        assert!(rec.gamma.rel_diff(&ctx.ratio(2, 3)) < ctx.tolerance());
    }

    #[test]
    fn indefinite_is_rejected() {
        let ctx = PrecisionContext::native();
        let a = diag(&ctx, &[1.0, -3.0]);
        let s = CgState::initial(&[ctx.one(), ctx.one()], &ctx).unwrap();
        assert!(matches!(cg_step(s, &a), Err(KrylovError::NotSpd { .. })));
    }

    #[test]
    fn bridge_by_substitution() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let mut t = CgTrace::new();
        for (k, g, d) in [(0, ctx.ratio(1, 2), ctx.zero()), (1, ctx.ratio(2, 3), ctx.ratio(1, 4))] {
            t.push(CgRecord {
                k,
                gamma: g,
                delta: d,
                rnorm2: ctx.one(),
                true_err2: None,
                theta1: None,
            });
        }
        let one = cg_to_lanczos(&t, 1).unwrap();
        assert_eq!(one.order(), 1);
        assert!(one.alphas()[0].rel_diff(&ctx.int(2)) < ctx.tolerance());
        let two = cg_to_lanczos(&t, 2).unwrap();
        assert!(two.alphas()[1].rel_diff(&ctx.int(2)) < ctx.tolerance());
        assert!(two.betas()[0].rel_diff(&ctx.one()) < ctx.tolerance());
        assert!(cg_to_lanczos(&t, 3).is_err());
    }

    #[test]
    fn bridge_rejects_nonpositive() {
        let ctx = PrecisionContext::native();
        let mut t = CgTrace::new();
        t.push(CgRecord {
            k: 0,
            gamma: ctx.real(-1.0),
            delta: ctx.zero(),
            rnorm2: ctx.one(),
            true_err2: None,
            theta1: None,
        });
        assert!(matches!(
            cg_to_lanczos(&t, 1),
            Err(KrylovError::NonPositiveCoefficient { name: "gamma", index: 0 })
        ));
    }

    #[test]
    fn error_of_zero_start_is_energy_of_solution() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let a = diag(&ctx, &[2.0, 4.0]);
        let exact = vec![ctx.ratio(1, 2), ctx.zero()];
        let e0 = true_error2(&[ctx.zero(), ctx.zero()], &exact, &a);
        assert!(e0.rel_diff(&ctx.ratio(1, 2)) < ctx.tolerance());
        assert!(true_error2(&exact, &exact, &a).is_zero());
    }
}
