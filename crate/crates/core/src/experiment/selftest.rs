//! Quick invariant checks on a small built-in model problem.

use crate::analysis::{eta_breakdown_with, omega_identity_check, RitzCache};
use crate::bounds::{adaptive_accept, MuEstimator};
use crate::krylov::{cg_to_lanczos, lanczos_step, ConjugateGradient, LanczosState};
use crate::numerics::{eig_tridiagonal, PrecisionContext, Real};
use crate::spectrum::{build_model_problem, rkpw, ModelParams};

use super::ExperimentError;

#[derive(Clone, Debug)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for SelfCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, worst: Real, tol: &Real) -> SelfCheck {
    SelfCheck {
        name,
        passed: &worst <= tol,
        detail: format!("worst {} (tolerance {})", worst.to_decimal(3), tol.to_decimal(2)),
    }
}

fn small_params() -> ModelParams {
    ModelParams {
        m: 6,
        lambda_first: "0.01".into(),
        lambda_last: "10".into(),
        rho: "0.7".into(),
        delta: "1e-4".into(),
        p: 2,
    }
}

/// Runs every check at `digits` decimal digits (`0` for binary64).
pub fn run_selftest(digits: u32) -> Result<Vec<SelfCheck>, ExperimentError> {
    let ctx = PrecisionContext::with_digits(digits)?;
    let p = build_model_problem(&small_params(), &ctx)?;
    let n = p.order();
    let mut cg = ConjugateGradient::new(&p.a, &p.b, &ctx)?.with_exact_solution(p.exact_solution.clone());
    cg.run(n)?;
    let trace = cg.into_trace();
    let tol = ctx.tolerance_with_guard(10);
    let mut out = Vec::new();

    let mut lz = LanczosState::new(&p.b, false, false)?;
    for _ in 0..trace.len() {
        lz = lanczos_step(lz, &p.a, &ctx)?;
    }
    let from_lanczos = lz.jacobi()?;
    let from_cg = cg_to_lanczos(&trace, trace.len())?;
    let worst = from_lanczos
        .alphas()
        .iter()
        .zip(from_cg.alphas())
        .chain(from_lanczos.betas().iter().zip(from_cg.betas()))
        .map(|(a, b)| a.rel_diff(b))
        .fold(ctx.zero(), Real::max);
    out.push(check("lanczos_cg_coefficients", worst, &tol));

    let rebuilt = rkpw(&p.distribution, &ctx)?;
    let eig = eig_tridiagonal(&rebuilt, &ctx)?;
    let worst = eig
        .thetas
        .iter()
        .zip(p.distribution.nodes())
        .map(|(t, x)| t.rel_diff(x))
        .fold(ctx.zero(), Real::max);
    out.push(check("rkpw_roundtrip_nodes", worst, &tol));

    let l1 = &p.lambda_min;
    let mus = [
        ("rel3", (ctx.one() - ctx.pow10(-3)) * l1),
        ("half", l1 / &ctx.int(2)),
    ];
    let cache = RitzCache::from_trace(&trace, ctx)?;
    let (mut chain, mut cross, mut prescribed, mut omega, mut accept) = (0usize, ctx.zero(), ctx.zero(), ctx.zero(), 0usize);
    for (label, mu) in &mus {
        let s = MuEstimator::from_records(*label, mu.clone(), trace.records());
        cross = cross.max(s.max_cross_check().unwrap_or_else(|| ctx.zero()));
        for k in 0..trace.len() {
            let (r, b) = (&trace.records()[k], &s.records[k]);
            let eps = r.true_err2.clone().expect("exact solution given");
            let strict = k == 0 || b.radau_upper < b.simple_upper;
            if k + 1 < trace.len() && !(b.gauss_lower <= eps && eps < b.radau_upper && strict) {
                chain += 1;
            }
            if k == 0 || k >= cache.max_order() {
                continue;
            }
            let t = cache.jacobi(k)?;
            let beta = cache.beta(k)?;
            let am = b.alpha_mu_next.clone().expect("mu below the spectrum");
            let tm = t.extended(beta.clone(), am)?;
            let dist = eig_tridiagonal(&tm, &ctx)?
                .thetas
                .iter()
                .map(|th| (th - mu).abs())
                .reduce(Real::min)
                .expect("nonempty spectrum");
            prescribed = prescribed.max(dist / tm.norm_inf());
            let eig = cache.get(k)?;
            let e = eta_breakdown_with(eig, &t, beta, mu, &ctx)?;
            omega = omega.max(omega_identity_check(&e, eig, &b.phi, &b.gamma_mu));
        }
        let tau = ctx.real(0.25);
        for a in adaptive_accept(&trace, &s, &tau)? {
            let eps = trace.records()[a.ell].true_err2.clone().expect("exact solution given");
            if (&a.omega - &eps) / &eps > tau || (&eps - &a.delta_lk) / &eps > tau {
                accept += 1;
            }
        }
    }
    out.push(SelfCheck {
        name: "bound_chain",
        passed: chain == 0,
        detail: format!("{chain} violations"),
    });
    out.push(check("gamma_mu_two_routes", cross, &tol));
    out.push(check("prescribed_eigenvalue", prescribed, &tol));
    out.push(check("omega_identity", omega, &tol));
    out.push(SelfCheck {
        name: "adaptive_acceptance",
        passed: accept == 0,
        detail: format!("{accept} violations at tau = 0.25"),
    });

    let last = trace.records().last().expect("nonempty trace");
    let eps = last.true_err2.clone().expect("exact solution given");
    out.push(check("final_step_identity", eps.rel_diff(&(&last.gamma * &last.rnorm2)), &tol));
    Ok(out)
}
