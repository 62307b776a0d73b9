//! Splits `alpha_{k+1}^(mu) - mu` into the per-Ritz-value terms `eta_i` and
//! checks the spectral formula for `1/gamma_k^(mu)` along the way.
//!
//! Run with `cargo run --release --example eta_terms`.

use radau_cg::analysis::{eta_breakdown_with, omega_identity_check, RitzCache};
use radau_cg::bounds::MuEstimator;
use radau_cg::krylov::ConjugateGradient;
use radau_cg::numerics::PrecisionContext;
use radau_cg::spectrum::{build_model_problem, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrecisionContext::with_digits(128)?;
    let p = build_model_problem(&ModelParams::reference(), &ctx)?;
    let mu = (ctx.one() - ctx.pow10(-3)) * &p.lambda_min;

    let mut cg = ConjugateGradient::new(&p.a, &p.b, &ctx)?;
    cg.run(p.order())?;
    let trace = cg.into_trace();
    let cache = RitzCache::from_trace(&trace, ctx)?;
    let series = MuEstimator::from_records("mu3", mu.clone(), trace.records());

    println!("{:>3} {:>10} {:>10} {:>4} {:>10} {:>10}", "k", "eta_1", "zeta", "max", "eta_max", "identity");
    for k in 1..trace.len() {
        let eig = cache.get(k)?;
        let e = eta_breakdown_with(eig, &cache.jacobi(k)?, cache.beta(k)?, &mu, &ctx)?;
        let (i, m) = e.max();
        let r = &series.records[k];
        let gap = omega_identity_check(&e, eig, &r.phi, &r.gamma_mu);
        println!(
            "{k:3} {:10.3e} {:10.3e} {:4} {:10.3e} {:>10}",
            e.etas[0].to_f64(),
            e.zeta.to_f64(),
            i + 1,
            m.to_f64(),
            gap.to_decimal(2)
        );
    }
    Ok(())
}
