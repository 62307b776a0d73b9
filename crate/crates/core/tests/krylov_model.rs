mod common;

use common::{max_of, reference_run, ModelRun};
use radau_cg::bounds::update_phi;
use radau_cg::krylov::{cg_to_lanczos, lanczos_step, ConjugateGradient, LanczosState};
use radau_cg::numerics::vector::{dot, norm2, norm2_squared};
use radau_cg::numerics::{eig_tridiagonal, ldl_solve, ldl_tridiagonal, PrecisionContext, Real};

fn lanczos_run(run: &ModelRun) -> LanczosState {
    let ctx = &run.ctx;
    let mut lz = LanczosState::new(&run.problem.b, true, false).unwrap();
    for _ in 0..run.problem.order() {
        lz = lanczos_step(lz, &run.problem.a, ctx).unwrap();
    }
    lz
}

#[test]
fn cg_coefficients_reproduce_lanczos() {
    let run = reference_run();
    let ctx = &run.ctx;
    let lz = lanczos_run(run);
    let t_l = lz.jacobi().unwrap();
    let t_cg = cg_to_lanczos(&run.trace, run.trace.len()).unwrap();
    assert_eq!(t_l.order(), t_cg.order());
    let gap = max_of(
        t_l.alphas()
            .iter()
            .zip(t_cg.alphas())
            .chain(t_l.betas().iter().zip(t_cg.betas()))
            .map(|(a, b)| a.rel_diff(b)),
        ctx,
    );
    assert!(gap <= ctx.tolerance_with_guard(10), "gap {}", gap.to_decimal(3));
}

#[test]
fn lanczos_three_term_relation() {
    let run = reference_run();
    let ctx = &run.ctx;
    let lz = lanczos_run(run);
    let v = lz.basis().unwrap();
    let t = lz.jacobi().unwrap();
    let k = t.order();
    let scale = run.problem.a.norm_inf();
    // column j of A V_k - V_k T_k, the last one also minus beta_k v_{k+1}
    for j in 0..k {
        let av = run.problem.a.mul_vec(&v[j]);
        let mut res = av;
        for (i, r) in res.iter_mut().enumerate() {
            *r -= &v[j][i] * &t.alphas()[j];
            if j > 0 {
                *r -= &v[j - 1][i] * &t.betas()[j - 1];
            }
            if j + 1 < k || v.len() > k {
                *r -= &v[j + 1][i] * &lz.betas()[j];
            }
        }
        let r = norm2(&res) / &scale;
        assert!(r <= ctx.tolerance(), "column {j}: {}", r.to_decimal(3));
    }
    for (j, vj) in v.iter().enumerate().take(k) {
        assert!(norm2(vj).rel_diff(&ctx.one()) <= ctx.tolerance(), "v_{j}");
    }
}

#[test]
fn residuals_are_signed_lanczos_vectors() {
    let run = reference_run();
    let ctx = &run.ctx;
    let lz = lanczos_run(run);
    let v = lz.basis().unwrap();
    let mut cg = ConjugateGradient::new(&run.problem.a, &run.problem.b, ctx)
        .unwrap()
        .retain_residuals();
    cg.run(run.problem.order()).unwrap();
    let res = cg.residuals().unwrap();
    // an updated residual is only as accurate, relatively, as u cond(A) |r_0| / |r_j|
    let cond = run.eigenvalues.last().unwrap() / &run.eigenvalues[0];
    let r0 = norm2(&res[0]);
    let mut smallest = r0.clone();
    for j in 0..run.trace.len() {
        let nr = norm2(&res[j]);
        smallest = smallest.min(nr.clone());
        let sign = if j % 2 == 0 { ctx.one() } else { -ctx.one() };
        let worst = max_of(res[j].iter().zip(&v[j]).map(|(r, vi)| (&(&sign * r) / &nr - vi).abs()), ctx);
        let tol = ctx.tolerance() * &cond * (&r0 / &smallest);
        assert!(worst <= tol, "j={j}: {} > {}", worst.to_decimal(3), tol.to_decimal(3));
    }
}

#[test]
fn residual_orthogonality_in_exact_mode() {
    for digits in [64, 128] {
        let run = if digits == 128 { None } else { Some(ModelRun::new(digits)) };
        let run = run.as_ref().unwrap_or_else(|| reference_run());
        let ctx = &run.ctx;
        let mut cg = ConjugateGradient::new(&run.problem.a, &run.problem.b, ctx)
            .unwrap()
            .retain_residuals();
        cg.run(run.problem.order()).unwrap();
        let res = cg.residuals().unwrap();
        let limit = ctx.pow10(-(digits as i64) / 2);
        for k in 0..run.trace.len() {
            for j in 0..k {
                let c = dot(&res[k], &res[j]).abs() / (norm2(&res[k]) * norm2(&res[j]));
                assert!(c <= limit, "D={digits} r_{k} . r_{j} = {}", c.to_decimal(3));
            }
        }
    }
}

#[test]
fn ldl_factors_are_cg_coefficients() {
    let run = reference_run();
    let ctx = &run.ctx;
    let t = cg_to_lanczos(&run.trace, run.trace.len()).unwrap();
    let f = ldl_tridiagonal(&t, ctx).unwrap();
    for (j, r) in run.trace.records().iter().enumerate() {
        assert!(f.pivots[j].rel_diff(&r.gamma.recip()) <= ctx.tolerance(), "pivot {j}");
        if j > 0 {
            assert!(f.multipliers[j - 1].rel_diff(&r.delta.sqrt()) <= ctx.tolerance(), "multiplier {j}");
        }
    }
}

#[test]
fn errors_decrease_and_telescope() {
    let run = reference_run();
    let ctx = &run.ctx;
    let recs = run.trace.records();
    let eps: Vec<Real> = recs.iter().map(|r| r.true_err2.clone().unwrap()).collect();
    assert!(eps.windows(2).all(|w| w[1] < w[0]));
    for l in 0..recs.len() {
        let mut sum = ctx.zero();
        for k in l + 1..recs.len() {
            sum += &recs[k - 1].gamma * &recs[k - 1].rnorm2;
            let gap = (&eps[l] - &(&sum + &eps[k])).abs() / &eps[l];
            assert!(gap <= ctx.tolerance(), "l={l} k={k}: {}", gap.to_decimal(3));
        }
    }
    let last = recs.last().unwrap();
    assert!(eps[recs.len() - 1].rel_diff(&(&last.gamma * &last.rnorm2)) <= ctx.tolerance_with_guard(12));
}

#[test]
fn initial_error_is_the_stieltjes_integral() {
    let run = reference_run();
    let ctx = &run.ctx;
    // spectral measure of (A, e_1): weights are squared first eigenvector entries
    let eig = eig_tridiagonal(&run.problem.a, ctx).unwrap();
    let integral: Real = eig
        .thetas
        .iter()
        .zip(&eig.first_components)
        .map(|(th, s)| s.square() / th)
        .sum();
    let eps0 = run.trace.records()[0].true_err2.clone().unwrap();
    assert_eq!(run.trace.records()[0].rnorm2, ctx.one());
    assert!(eps0.rel_diff(&integral) <= ctx.tolerance());
    assert!(eps0.rel_diff(&run.problem.exact_solution[0]) <= ctx.tolerance());
}

#[test]
fn gauss_rule_remainder_is_the_error() {
    let run = reference_run();
    let ctx = &run.ctx;
    let integral = &run.problem.exact_solution[0];
    let t = cg_to_lanczos(&run.trace, run.trace.len()).unwrap();
    for k in 1..run.trace.len() {
        let tk = t.leading(k);
        let mut e1 = vec![ctx.zero(); k];
        e1[0] = ctx.one();
        let quad = ldl_solve(&ldl_tridiagonal(&tk, ctx).unwrap(), &e1)[0].clone();
        let eps = run.trace.records()[k].true_err2.clone().unwrap();
        let gap = (&(integral - &quad) - &eps).abs() / integral;
        assert!(gap <= ctx.tolerance(), "k={k}: {}", gap.to_decimal(3));
    }
}

#[test]
fn phi_matches_vector_ratio() {
    let run = reference_run();
    let ctx = &run.ctx;
    let mut cg = ConjugateGradient::new(&run.problem.a, &run.problem.b, ctx).unwrap();
    let mut phi = ctx.one();
    for k in 0..run.trace.len() {
        let s = cg.state();
        let direct = &s.rnorm2 / &norm2_squared(&s.p);
        if k > 0 {
            phi = update_phi(&phi, &run.trace.records()[k].delta);
        }
        assert!(phi.rel_diff(&direct) <= ctx.tolerance(), "k={k}");
        assert!(phi.is_positive() && phi <= 1.0);
        cg.step().unwrap();
    }
}

#[test]
fn native_run_is_usable_but_not_exact() {
    let ctx = PrecisionContext::native();
    let hi = reference_run();
    let a = hi.problem.a.rounded(&ctx);
    let mut b = vec![ctx.zero(); a.order()];
    b[0] = ctx.one();
    let mut cg = ConjugateGradient::new(&a, &b, &ctx).unwrap();
    cg.run(a.order()).unwrap();
    let native = cg.into_trace();
    // binary64 follows the exact run early on and then drifts
    assert!(native.records()[5].gamma.rel_diff(&hi.trace.records()[5].gamma) < 1e-8);
    assert!(native.records()[25].gamma.rel_diff(&hi.trace.records()[25].gamma) > 1e-8);
}
