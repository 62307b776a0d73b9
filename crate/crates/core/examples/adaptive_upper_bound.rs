//! The adaptive loop: CG is advanced one step at a time and, whenever the
//! accuracy test passes, an improved upper bound for an earlier iterate is
//! accepted.
//!
//! Run with `cargo run --release --example adaptive_upper_bound`.

use radau_cg::bounds::{AdaptiveAcceptor, MuEstimator, DEFAULT_TAU};
use radau_cg::krylov::ConjugateGradient;
use radau_cg::numerics::PrecisionContext;
use radau_cg::spectrum::{build_model_problem, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrecisionContext::with_digits(128)?;
    let p = build_model_problem(&ModelParams::reference(), &ctx)?;
    let mu = (ctx.one() - ctx.pow10(-3)) * &p.lambda_min;

    let mut cg = ConjugateGradient::new(&p.a, &p.b, &ctx)?.with_exact_solution(p.exact_solution.clone());
    let mut est = MuEstimator::new("mu3", mu);
    let mut acc = AdaptiveAcceptor::new(ctx.real(DEFAULT_TAU))?;

    println!("{:>4} {:>4} {:>12} {:>12} {:>9}", "ell", "k", "bound", "error", "overshoot");
    for k in 0..p.order() {
        let rec = cg.step()?.clone();
        est.observe(&rec);
        for a in acc.observe(cg.trace(), est.series(), k)? {
            let err = cg.trace().records()[a.ell].true_err2.clone().expect("oracle");
            let over = (&a.omega - &err) / &err;
            println!(
                "{:4} {:4} {:12.4e} {:12.4e} {:9.2e}",
                a.ell,
                a.k,
                a.omega.to_f64(),
                err.to_f64(),
                over.to_f64()
            );
        }
    }
    println!("{} bounds accepted, still waiting on iterate {}", acc.accepted().len(), acc.ell());
    Ok(())
}
