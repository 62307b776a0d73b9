//! Builds the clustered model problem and shows where its pieces come from.
//!
//! Run with `cargo run --release --example model_problem`.

use radau_cg::numerics::{eig_tridiagonal, PrecisionContext, Real};
use radau_cg::spectrum::{build_model_problem, lanczos_reconstruction, ModelParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrecisionContext::with_digits(128)?;
    let params = ModelParams::reference();
    let p = build_model_problem(&params, &ctx)?;

    println!("m = {}, p = {}  ->  N = {}", params.m, params.p, p.order());
    println!("lambda_1 = {}", p.lambda_min.to_decimal(25));
    let nodes = p.distribution.nodes();
    println!("nodes span {} .. {}", nodes[0].to_decimal(6), nodes[nodes.len() - 1].to_decimal(6));

    // Two independent reconstructions of the same Jacobi matrix.
    let other = lanczos_reconstruction(&p.distribution, &ctx)?;
    let gap = p
        .reference_t
        .alphas()
        .iter()
        .zip(other.alphas())
        .map(|(a, b)| a.rel_diff(b))
        .fold(ctx.zero(), Real::max);
    println!("rkpw vs Lanczos, max relative gap in alpha: {}", gap.to_decimal(3));

    // A is the reference matrix rounded to binary64, so its spectrum moved a little.
    let lam = eig_tridiagonal(&p.a, &ctx)?.thetas;
    let moved = lam.iter().zip(nodes).map(|(l, x)| l.rel_diff(x)).fold(ctx.zero(), Real::max);
    println!("spectrum of A vs nodes, max relative shift: {}", moved.to_decimal(3));
    Ok(())
}
