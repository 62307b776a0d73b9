//! One matrix, two arithmetics. The model matrix has binary64 entries, so
//! it can be run exactly as given in binary64 and at 128 digits. Rounding
//! errors delay convergence in binary64, and the bounds from that run
//! follow its error until the error stalls at the attainable accuracy.
//! From there on the bounds keep decreasing and no longer mean anything.
//!
//! Run with `cargo run --release --example precision_comparison`.

use radau_cg::bounds::MuEstimator;
use radau_cg::krylov::{CgTrace, ConjugateGradient};
use radau_cg::numerics::{JacobiMatrix, PrecisionContext, Real};
use radau_cg::spectrum::{build_model_problem, ModelParams};

/// Errors are measured against the 128-digit `exact`, whatever `ctx` is.
fn run(
    a: &JacobiMatrix,
    exact: &[Real],
    mu: &Real,
    ctx: &PrecisionContext,
    iters: usize,
) -> Result<(CgTrace, Vec<f64>), Box<dyn std::error::Error>> {
    let a = a.rounded(ctx);
    let mut b = vec![ctx.zero(); a.order()];
    b[0] = ctx.one();
    let mut cg = ConjugateGradient::new(&a, &b, ctx)?.with_exact_solution(exact.to_vec());
    cg.run(iters)?;
    let trace = cg.into_trace();
    let s = MuEstimator::from_records("mu3", ctx.round(mu), trace.records());
    let radau = s.records.iter().map(|r| r.radau_upper.sqrt().to_f64()).collect();
    Ok((trace, radau))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let iters = 60;
    let high = PrecisionContext::with_digits(128)?;
    let p = build_model_problem(&ModelParams::reference(), &high)?;
    let mu = (high.one() - high.pow10(-3)) * &p.lambda_min;
    let (exact, _) = run(&p.a, &p.exact_solution, &mu, &high, iters)?;
    let (native, radau) = run(&p.a, &p.exact_solution, &mu, &PrecisionContext::native(), iters)?;

    println!("{:>3} {:>13} {:>13} {:>13}", "k", "err (128 dig)", "err (double)", "radau (dbl)");
    for k in (0..native.len()).step_by(3) {
        let e = |t: &CgTrace| {
            t.get(k)
                .and_then(|r| r.true_err2.as_ref())
                .map_or("-".to_string(), |e| format!("{:.3e}", e.sqrt().to_f64()))
        };
        println!("{k:3} {:>13} {:>13} {:13.3e}", e(&exact), e(&native), radau[k]);
    }
    Ok(())
}
