//! Gauss and Gauss-Radau quadrature for `int 1/x d omega` built from the
//! Jacobi matrix of a discrete measure. The Gauss rule undershoots, the
//! Radau rule with a node below the support overshoots.
//!
//! Run with `cargo run --release --example gauss_quadrature`.

use radau_cg::numerics::{eig_tridiagonal, ldl_solve, ldl_tridiagonal, solve_shifted, JacobiMatrix, PrecisionContext, Real};
use radau_cg::spectrum::{rkpw, strakos_nodes, DistributionFunction};

/// `e_1^T J^{-1} e_1`: the `k`-point quadrature of `1/x` for the measure of `J`.
fn quad(j: &JacobiMatrix, ctx: &PrecisionContext) -> Result<Real, Box<dyn std::error::Error>> {
    let mut e1 = vec![ctx.zero(); j.order()];
    e1[0] = ctx.one();
    Ok(ldl_solve(&ldl_tridiagonal(j, ctx)?, &e1)[0].clone())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = PrecisionContext::with_digits(60)?;
    let nodes = strakos_nodes(20, &ctx.parse("0.01")?, &ctx.int(10), &ctx.parse("0.8")?, &ctx)?;
    let dist = DistributionFunction::uniform(nodes, &ctx)?;
    let t = rkpw(&dist, &ctx)?;
    let exact = dist.moment(-1);
    let mu = ctx.parse("0.009")?;
    println!("int 1/x = {}", exact.to_decimal(20));

    for k in [2, 4, 8, 12] {
        let tk = t.leading(k);
        let gauss = quad(&tk, &ctx)?;
        // Radau: extend T_k by the coefficient that puts mu into the spectrum.
        let shifted = solve_shifted(&tk, &mu, &unit_last(k, &ctx), &ctx)?;
        let beta = &t.betas()[k - 1];
        let alpha_mu = &mu + &(beta.square() * &shifted[k - 1]);
        let radau = quad(&tk.extended(beta.clone(), alpha_mu.clone())?, &ctx)?;
        let has_mu = eig_tridiagonal(&tk.extended(beta.clone(), alpha_mu)?, &ctx)?
            .thetas
            .iter()
            .any(|th| (th - &mu).abs() < ctx.tolerance());
        println!(
            "k = {k:2}: gauss {:.12e}  radau {:.12e}  (mu is a node: {has_mu})",
            (&exact - &gauss).to_f64(),
            (&radau - &exact).to_f64()
        );
    }
    Ok(())
}

fn unit_last(k: usize, ctx: &PrecisionContext) -> Vec<Real> {
    let mut e = vec![ctx.zero(); k];
    e[k - 1] = ctx.one();
    e
}
