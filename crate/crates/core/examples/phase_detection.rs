//! Phase 1 / phase 2: when the smallest Ritz value gets closer to
//! `lambda_1` than `mu` is, the Gauss-Radau bound starts to lag. The onset
//! needs `lambda_1`; the markers `l1`, `l2` only use CG quantities.
//!
//! Run with `cargo run --release --example phase_detection`.

use radau_cg::analysis::{analyze_series, Oracle, RitzCache};
use radau_cg::bounds::MuEstimator;
use radau_cg::krylov::ConjugateGradient;
use radau_cg::numerics::PrecisionContext;
use radau_cg::spectrum::{build_model_problem, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrecisionContext::with_digits(128)?;
    let p = build_model_problem(&ModelParams::reference(), &ctx)?;
    let l1 = p.lambda_min.clone();

    let mut cg = ConjugateGradient::new(&p.a, &p.b, &ctx)?;
    cg.run(p.order())?;
    let trace = cg.into_trace();
    let cache = RitzCache::from_trace(&trace, ctx)?;
    let oracle = Oracle { lambda1: l1.clone(), eigenvalues: None };

    let mus = [
        ("mu3", (ctx.one() - ctx.pow10(-3)) * &l1),
        ("mu8", (ctx.one() - ctx.pow10(-8)) * &l1),
        ("mu16", l1.native_floor()),
        ("mu50", (ctx.one() - ctx.pow10(-50)) * &l1),
    ];
    let fmt = |x: Option<usize>| x.map_or("none".into(), |v: usize| v.to_string());
    for (label, mu) in mus {
        let s = MuEstimator::from_records(label, mu, trace.records());
        let rep = analyze_series(&trace, &s, &cache, Some(&oracle))?;
        println!(
            "{label:>5}: onset {:>5}   l1 {:>4}   l2 {:>4}",
            rep.onset.expect("oracle mode").to_string(),
            fmt(rep.markers.ell1),
            fmt(rep.markers.ell2)
        );
    }
    Ok(())
}
