use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::krylov::matrix_market::{normalized_ones, read_matrix_market, validate_spd_candidate};
use crate::krylov::{LinearOperator, SparseSymmetric};
use crate::numerics::{eig_tridiagonal, ldl_solve, ldl_tridiagonal, JacobiMatrix, PrecisionContext, Real};
use crate::spectrum::build_model_problem;

use super::{ExperimentConfig, ExperimentError, ProblemSource, RhsSpec};

#[derive(Clone, Debug)]
pub enum Operator {
    Jacobi(JacobiMatrix),
    Sparse(SparseSymmetric),
}

impl LinearOperator for Operator {
    fn dim(&self) -> usize {
        match self {
            Operator::Jacobi(t) => t.order(),
            Operator::Sparse(a) => a.dim(),
        }
    }

    fn apply(&self, x: &[Real]) -> Vec<Real> {
        match self {
            Operator::Jacobi(t) => t.mul_vec(x),
            Operator::Sparse(a) => a.apply(x),
        }
    }

    fn norm_inf(&self) -> Real {
        match self {
            Operator::Jacobi(t) => t.norm_inf(),
            Operator::Sparse(a) => a.norm_inf(),
        }
    }
}

/// A linear system ready for CG, plus whatever oracle data is available.
#[derive(Clone, Debug)]
pub struct Problem {
    pub op: Operator,
    pub b: Vec<Real>,
    /// Smallest eigenvalue of the operator.
    pub lambda1: Option<Real>,
    /// `A^{-1} b` at working precision, in oracle mode.
    pub exact: Option<Vec<Real>>,
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>, ExperimentError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| ExperimentError::File {
            path: path.to_path_buf(),
            source: e,
        })
}

/// One value per line.
pub fn read_vector<R: BufRead>(input: R, ctx: &PrecisionContext) -> Result<Vec<Real>, ExperimentError> {
    let mut v = Vec::new();
    for line in input.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            v.push(ctx.parse(&line)?);
        }
    }
    Ok(v)
}

pub fn write_vector<W: Write>(mut out: W, v: &[Real], digits: usize) -> std::io::Result<()> {
    for x in v {
        writeln!(out, "{}", x.to_decimal(digits))?;
    }
    Ok(())
}

fn unit(n: usize, ctx: &PrecisionContext) -> Vec<Real> {
    let mut e = vec![ctx.zero(); n];
    e[0] = ctx.one();
    e
}

pub(crate) fn build_rhs(
    spec: &RhsSpec,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<Real>, ExperimentError> {
    let b = match spec {
        RhsSpec::NormalizedOnes => normalized_ones(n, ctx),
        RhsSpec::E1 => unit(n, ctx),
        RhsSpec::File(path) => read_vector(open(path)?, ctx)?,
    };
    if b.len() != n {
        return Err(ExperimentError::Config {
            line: None,
            message: format!("right-hand side has {} entries, matrix has order {n}", b.len()),
        });
    }
    Ok(b)
}

fn configured_lambda(cfg: &ExperimentConfig, ctx: &PrecisionContext) -> Result<Option<Real>, ExperimentError> {
    Ok(cfg.lambda_min.as_deref().map(|s| ctx.parse(s)).transpose()?)
}

/// Builds or reads the system described by `cfg`. Oracle data is only
/// computed when `cfg.oracle` is set.
pub fn load_problem(cfg: &ExperimentConfig, ctx: &PrecisionContext) -> Result<Problem, ExperimentError> {
    match &cfg.source {
        ProblemSource::Model(params) => {
            let p = build_model_problem(params, ctx)?;
            let b = match &cfg.rhs {
                Some(spec) => build_rhs(spec, p.order(), ctx)?,
                None => p.b.clone(),
            };
            let exact = match (cfg.oracle, &cfg.rhs) {
                (false, _) => None,
                (true, None) => Some(p.exact_solution.clone()),
                (true, Some(_)) => Some(ldl_solve(&ldl_tridiagonal(&p.a, ctx)?, &b)),
            };
            Ok(Problem {
                lambda1: cfg.oracle.then(|| p.lambda_min.clone()),
                op: Operator::Jacobi(p.a),
                b,
                exact,
            })
        }
        ProblemSource::Jacobi(path) => {
            let t = crate::spectrum::io::read_jacobi(open(path)?, ctx)?;
            let b = build_rhs(cfg.rhs.as_ref().unwrap_or(&RhsSpec::E1), t.order(), ctx)?;
            let (lambda1, exact) = if cfg.oracle {
                let l1 = match configured_lambda(cfg, ctx)? {
                    Some(l) => l,
                    None => eig_tridiagonal(&t, ctx)?.smallest().clone(),
                };
                (Some(l1), Some(ldl_solve(&ldl_tridiagonal(&t, ctx)?, &b)))
            } else {
                (None, None)
            };
            Ok(Problem {
                op: Operator::Jacobi(t),
                b,
                lambda1,
                exact,
            })
        }
        ProblemSource::Matrix(path) => {
            let a = read_matrix_market(open(path)?, ctx)?;
            validate_spd_candidate(&a, ctx)?;
            let b = build_rhs(cfg.rhs.as_ref().unwrap_or(&RhsSpec::NormalizedOnes), a.dim(), ctx)?;
            let (lambda1, exact) = if cfg.oracle {
                let l1 = configured_lambda(cfg, ctx)?.ok_or_else(|| ExperimentError::Config {
                    line: None,
                    message: "oracle mode on a Matrix Market problem needs `lambda_min`".into(),
                })?;
                (Some(l1), Some(a.solve_dense(&b, ctx)?))
            } else {
                (None, None)
            };
            Ok(Problem {
                op: Operator::Sparse(a),
                b,
                lambda1,
                exact,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::MuSpec;

    #[test]
    fn jacobi_source_defaults_to_e1() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jacobi");
        std::fs::write(&path, "jacobi 2 0\n2\n3\n1\n").unwrap();
        let cfg = ExperimentConfig {
            source: ProblemSource::Jacobi(path),
            oracle: true,
            mus: vec![MuSpec::Relative(3)],
            ..Default::default()
        };
        let p = load_problem(&cfg, &ctx).unwrap();
        assert_eq!(p.b, vec![ctx.one(), ctx.zero()]);
        // [[2,1],[1,3]] has eigenvalues (5 -+ sqrt 5)/2
        let l1 = (ctx.int(5) - ctx.int(5).sqrt()) / ctx.int(2);
        assert!(p.lambda1.unwrap().rel_diff(&l1) < ctx.tolerance());
        let x = p.exact.unwrap();
        assert!(x[0].rel_diff(&ctx.ratio(3, 5)) < ctx.tolerance());
    }

    #[test]
    fn rhs_length_is_checked() {
        let ctx = PrecisionContext::native();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.txt");
        std::fs::write(&path, "1\n2\n3\n").unwrap();
        assert!(build_rhs(&RhsSpec::File(path.clone()), 3, &ctx).is_ok());
        assert!(build_rhs(&RhsSpec::File(path), 2, &ctx).is_err());
    }
}
