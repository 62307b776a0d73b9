//! Gauss lower bound, Gauss-Radau and simple upper bounds next to the true
//! A-norm error, for several choices of the prescribed node `mu`.
//!
//! Run with `cargo run --release --example cg_bounds`.

use radau_cg::bounds::MuEstimator;
use radau_cg::krylov::ConjugateGradient;
use radau_cg::numerics::PrecisionContext;
use radau_cg::spectrum::{build_model_problem, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrecisionContext::with_digits(128)?;
    let p = build_model_problem(&ModelParams::reference(), &ctx)?;
    let l1 = &p.lambda_min;

    let mut cg = ConjugateGradient::new(&p.a, &p.b, &ctx)?.with_exact_solution(p.exact_solution.clone());
    cg.run(p.order())?;
    let trace = cg.into_trace();

    let mus = [
        ("mu3", (ctx.one() - ctx.pow10(-3)) * l1),
        ("mu8", (ctx.one() - ctx.pow10(-8)) * l1),
        ("mu50", (ctx.one() - ctx.pow10(-50)) * l1),
    ];
    let series: Vec<_> = mus
        .iter()
        .map(|(label, mu)| MuEstimator::from_records(*label, mu.clone(), trace.records()))
        .collect();

    println!("{:>3} {:>11} {:>11} {:>11} {:>11} {:>11}", "k", "error", "gauss", "radau mu3", "radau mu8", "radau mu50");
    for (k, rec) in trace.records().iter().enumerate() {
        let err = rec.true_err2.as_ref().expect("exact solution known").sqrt();
        let g = series[0].records[k].gauss_lower.sqrt();
        let r: Vec<String> = series
            .iter()
            .map(|s| format!("{:11.3e}", s.records[k].radau_upper.sqrt().to_f64()))
            .collect();
        println!("{k:3} {:11.3e} {:11.3e} {}", err.to_f64(), g.to_f64(), r.join(" "));
    }
    let s = &series[0];
    let last = trace.len() - 2;
    println!(
        "simple bound at k = {last}: {:.3e}",
        s.records[last].simple_upper.sqrt().to_f64()
    );
    Ok(())
}
