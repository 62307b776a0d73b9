//! Randomized property suites shared by the property tests and the
//! acceptance runner. Each returns how many instances violated the property.

use rand::Rng;

use radau_cg::analysis::{eta_breakdown, lemma2_diff, omega_identity_check};
use radau_cg::bounds::{update_alpha_mu, MuEstimator};
use radau_cg::krylov::ConjugateGradient;
use radau_cg::numerics::{eig_tridiagonal, JacobiMatrix, PrecisionContext, Real};

use super::{max_of, random_jacobi, rng};

pub struct Outcome {
    pub instances: usize,
    pub violations: usize,
    /// Largest measured discrepancy (zero for pure ordering checks).
    pub worst: Real,
}

impl Outcome {
    fn new(ctx: &PrecisionContext) -> Self {
        Self { instances: 0, violations: 0, worst: ctx.zero() }
    }

    fn record(&mut self, ok: bool) {
        self.instances += 1;
        if !ok {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} instances, {} violations, worst {}",
            self.instances,
            self.violations,
            self.worst.to_decimal(3)
        )
    }
}

fn e1(n: usize, ctx: &PrecisionContext) -> Vec<Real> {
    let mut b = vec![ctx.zero(); n];
    b[0] = ctx.one();
    b
}

/// `alpha_{k+1}^(mu)` by the recurrence over the entries of `T_{k+1}`.
fn alpha_mu_by_recurrence(t: &JacobiMatrix, k: usize, mu: &Real) -> Real {
    let mut am = mu.clone();
    for j in 0..k {
        am = update_alpha_mu(&am, &t.alphas()[j], &t.betas()[j].square(), mu).unwrap();
    }
    am
}

fn fraction<R: Rng>(rng: &mut R, lo: f64, hi: f64, ctx: &PrecisionContext) -> Real {
    ctx.real(rng.gen_range(lo..hi))
}

/// The direct `gamma^(mu)` recurrence and the `alpha^(mu)` route agree.
pub fn consistency_triple(seed: u64, count: usize, ctx: &PrecisionContext) -> Outcome {
    let mut rng = rng(seed);
    let tol = ctx.tolerance_with_guard(10);
    let mut out = Outcome::new(ctx);
    for _ in 0..count {
        let n = rng.gen_range(3..16);
        let a = random_jacobi(&mut rng, n, ctx);
        let l1 = eig_tridiagonal(&a, ctx).unwrap().smallest().clone();
        let mu = fraction(&mut rng, 0.1, 0.99, ctx) * &l1;
        let mut cg = ConjugateGradient::new(&a, &e1(n, ctx), ctx).unwrap();
        cg.run(n).unwrap();
        let s = MuEstimator::from_records("m", mu, cg.trace().records());
        let worst = s.max_cross_check().unwrap_or_else(|| ctx.zero());
        out.record(worst <= tol && s.invalid_since().is_none());
        out.worst = out.worst.clone().max(worst);
    }
    out
}

/// `T_{k+1}^(mu)` built from the recurrence has `mu` as an eigenvalue.
pub fn prescribed_eigenvalue(seed: u64, count: usize, ctx: &PrecisionContext) -> Outcome {
    let mut rng = rng(seed);
    let tol = ctx.tolerance_with_guard(10);
    let mut out = Outcome::new(ctx);
    for _ in 0..count {
        let k = rng.gen_range(1..15);
        let t = random_jacobi(&mut rng, k + 1, ctx);
        let tk = t.leading(k);
        let th1 = eig_tridiagonal(&tk, ctx).unwrap().smallest().clone();
        let mu = fraction(&mut rng, -0.5, 0.99, ctx) * &th1;
        let am = alpha_mu_by_recurrence(&t, k, &mu);
        let tm = tk.extended(t.betas()[k - 1].clone(), am).unwrap();
        let dist = eig_tridiagonal(&tm, ctx)
            .unwrap()
            .thetas
            .iter()
            .map(|th| (th - &mu).abs())
            .reduce(Real::min)
            .unwrap();
        let rel = &dist / &tm.norm_inf();
        out.record(rel <= tol);
        out.worst = out.worst.clone().max(rel);
    }
    out
}

/// `mu < lambda < theta_1^{(k+1)}` gives
/// `alpha_{k+1}^(mu) < alpha_{k+1}^(lambda) < alpha_{k+1}`.
pub fn alpha_monotonicity(seed: u64, count: usize, ctx: &PrecisionContext) -> Outcome {
    let mut rng = rng(seed);
    let mut out = Outcome::new(ctx);
    for _ in 0..count {
        let k = rng.gen_range(1..15);
        let t = random_jacobi(&mut rng, k + 1, ctx);
        let tk = t.leading(k);
        let th1_next = eig_tridiagonal(&t, ctx).unwrap().smallest().clone();
        let beta = &t.betas()[k - 1];
        let hi = fraction(&mut rng, 0.05, 0.999, ctx);
        let lo = &hi * &fraction(&mut rng, -1.0, 0.999, ctx);
        let (mu, lambda) = (&lo * &th1_next, &hi * &th1_next);
        let am = eta_breakdown(&tk, beta, &mu, ctx).unwrap().alpha_mu_next();
        let al = eta_breakdown(&tk, beta, &lambda, ctx).unwrap().alpha_mu_next();
        out.record(am < al && al < t.alphas()[k]);
    }
    out
}

/// Symmetry of `E`, the per-term sensitivity formula and the difference
/// formula for `alpha^(lambda) - alpha^(mu)`.
pub fn shift_sensitivity(seed: u64, count: usize, ctx: &PrecisionContext) -> Outcome {
    let mut rng = rng(seed);
    let tol = ctx.tolerance_with_guard(10);
    let mut out = Outcome::new(ctx);
    for _ in 0..count {
        let k = rng.gen_range(1..15);
        let t = random_jacobi(&mut rng, k, ctx);
        let beta = fraction(&mut rng, 0.05, 1.0, ctx);
        let th1 = eig_tridiagonal(&t, ctx).unwrap().smallest().clone();
        let hi = fraction(&mut rng, 0.05, 0.99, ctx);
        let lo = &hi * &fraction(&mut rng, 0.01, 0.99, ctx);
        let d = lemma2_diff(&t, &beta, &(&lo * &th1), &(&hi * &th1), ctx).unwrap();
        let sym = d.e_lambda_mu.rel_diff(&d.e_mu_lambda);
        let sens = max_of(d.growth.iter().zip(&d.predicted_growth).map(|(g, p)| g.rel_diff(p)), ctx);
        let diff1 = d.alpha_diff.rel_diff(&d.alpha_diff_formula);
        let worst = sym.max(sens).max(diff1);
        out.record(worst <= tol && d.alpha_diff.is_positive());
        out.worst = out.worst.clone().max(worst);
    }
    out
}

/// Ritz values of `T_k` strictly interlace those of `T_{k+1}`.
pub fn interlacing(seed: u64, count: usize, ctx: &PrecisionContext) -> Outcome {
    let mut rng = rng(seed);
    let mut out = Outcome::new(ctx);
    for _ in 0..count {
        let n = rng.gen_range(2..16);
        let t = random_jacobi(&mut rng, n, ctx);
        let mut ok = true;
        let mut prev = eig_tridiagonal(&t.leading(1), ctx).unwrap().thetas;
        for k in 2..=n {
            let cur = eig_tridiagonal(&t.leading(k), ctx).unwrap().thetas;
            for (i, p) in prev.iter().enumerate() {
                ok &= &cur[i] < p && p < &cur[i + 1];
            }
            prev = cur;
        }
        out.record(ok);
    }
    out
}

/// The coefficient identity along full CG runs on random 20x20 Jacobi
/// matrices with `mu = 0.9 lambda_1`.
pub fn omega_identity_random(seed: u64, count: usize, ctx: &PrecisionContext, tol: &Real) -> Outcome {
    let mut rng = rng(seed);
    let mut out = Outcome::new(ctx);
    for _ in 0..count {
        let a = random_jacobi(&mut rng, 20, ctx);
        let l1 = eig_tridiagonal(&a, ctx).unwrap().smallest().clone();
        let mu = ctx.real(0.9) * &l1;
        let mut cg = ConjugateGradient::new(&a, &e1(20, ctx), ctx).unwrap();
        cg.run(20).unwrap();
        let trace = cg.into_trace();
        let s = MuEstimator::from_records("m", mu.clone(), trace.records());
        let t = radau_cg::krylov::cg_to_lanczos(&trace, trace.len()).unwrap();
        let mut worst = ctx.zero();
        for k in 1..trace.len() {
            let tk = t.leading(k);
            let eig = eig_tridiagonal(&tk, ctx).unwrap();
            let e = eta_breakdown(&tk, &t.betas()[k - 1], &mu, ctx).unwrap();
            let b = &s.records[k];
            worst = worst.max(omega_identity_check(&e, &eig, &b.phi, &b.gamma_mu));
        }
        out.record(&worst <= tol);
        out.worst = out.worst.clone().max(worst);
    }
    out
}
