//! Reads a Matrix Market file (here a 1D Laplacian written on the fly),
//! runs CG in binary64 and at 64 digits, and prints the Gauss-Radau bound
//! with a `mu` below the known smallest eigenvalue.
//!
//! Run with `cargo run --release --example matrix_market [file.mtx]`.

use std::io::BufReader;

use radau_cg::bounds::MuEstimator;
use radau_cg::krylov::matrix_market::{normalized_ones, read_matrix_market, validate_spd_candidate, write_matrix_market};
use radau_cg::krylov::{ConjugateGradient, LinearOperator, SparseSymmetric};
use radau_cg::numerics::PrecisionContext;

fn laplacian(n: usize, ctx: &PrecisionContext) -> SparseSymmetric {
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, ctx.int(2)));
        if i > 0 {
            t.push((i, i - 1, ctx.int(-1)));
        }
    }
    SparseSymmetric::from_triplets(n, t)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut buf = Vec::new();
            write_matrix_market(&mut buf, &laplacian(40, &PrecisionContext::native()), 17)?;
            String::from_utf8(buf)?
        }
    };
    // smallest eigenvalue of the 40x40 Laplacian is 2 - 2 cos(pi/41) ~ 5.86e-3
    let mu_text = "5.8e-3";

    // reference solution at 64 digits, also used to measure the binary64 run
    let hi = PrecisionContext::with_digits(64)?;
    let a_hi = read_matrix_market(BufReader::new(text.as_bytes()), &hi)?;
    let exact = a_hi.solve_dense(&normalized_ones(a_hi.dim(), &hi), &hi)?;

    for digits in [0, 64] {
        let ctx = PrecisionContext::with_digits(digits)?;
        let a = read_matrix_market(BufReader::new(text.as_bytes()), &ctx)?;
        validate_spd_candidate(&a, &ctx)?;
        let b = normalized_ones(a.dim(), &ctx);
        let mut cg = ConjugateGradient::new(&a, &b, &ctx)?.with_exact_solution(exact.clone());
        cg.run(a.dim())?;
        let s = MuEstimator::from_records("mu", ctx.parse(mu_text)?, cg.trace().records());
        println!("{ctx}: {} iterations", cg.trace().len());
        for (r, bnd) in cg.trace().records().iter().zip(&s.records).step_by(4).take(6) {
            println!(
                "  k {:3}  error {:10.3e}  radau {:10.3e}  trusted {}",
                r.k,
                r.true_err2.as_ref().unwrap().sqrt().to_f64(),
                bnd.radau_upper.sqrt().to_f64(),
                bnd.trusted
            );
        }
    }
    Ok(())
}

