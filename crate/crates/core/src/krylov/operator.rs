use crate::numerics::{JacobiMatrix, PrecisionContext, Real};

use super::KrylovError;

/// Symmetric matrix-vector product contract used by Lanczos and CG.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[Real]) -> Vec<Real>;

    /// Infinity-norm (or an upper estimate of it); scales breakdown tests.
    fn norm_inf(&self) -> Real;
}

impl LinearOperator for JacobiMatrix {
    fn dim(&self) -> usize {
        self.order()
    }

    fn apply(&self, x: &[Real]) -> Vec<Real> {
        self.mul_vec(x)
    }

    fn norm_inf(&self) -> Real {
        JacobiMatrix::norm_inf(self)
    }
}

/// Sparse symmetric matrix stored as full rows (both triangles).
#[derive(Clone, Debug)]
pub struct SparseSymmetric {
    n: usize,
    rows: Vec<Vec<(usize, Real)>>,
}

impl SparseSymmetric {
    /// Builds from lower- or upper-triangle triplets (0-based). Repeated
    /// entries are summed.
    pub fn from_triplets(n: usize, triplets: Vec<(usize, usize, Real)>) -> Self {
        let mut rows: Vec<Vec<(usize, Real)>> = vec![Vec::new(); n];
        let mut add = |i: usize, j: usize, v: Real| {
            let row = &mut rows[i];
            match row.iter_mut().find(|(c, _)| *c == j) {
                Some((_, x)) => *x += v,
                None => row.push((j, v)),
            }
        };
        for (i, j, v) in triplets {
            if i != j {
                add(j, i, v.clone());
            }
            add(i, j, v);
        }
        for row in rows.iter_mut() {
            row.sort_by_key(|(c, _)| *c);
        }
        Self { n, rows }
    }

    pub fn from_jacobi(t: &JacobiMatrix) -> Self {
        let mut triplets: Vec<(usize, usize, Real)> = t
            .alphas()
            .iter()
            .enumerate()
            .map(|(i, a)| (i, i, a.clone()))
            .collect();
        triplets.extend(t.betas().iter().enumerate().map(|(i, b)| (i + 1, i, b.clone())));
        Self::from_triplets(t.order(), triplets)
    }

    pub fn nnz_lower(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().filter(|(c, _)| *c <= i).count())
            .sum()
    }

    /// Lower-triangle entries `(i, j, a_ij)` with `i >= j`, row-major.
    pub fn lower_triplets(&self) -> impl Iterator<Item = (usize, usize, &Real)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .filter(move |(c, _)| *c <= i)
                .map(move |(c, v)| (i, *c, v))
        })
    }

    pub fn diagonal(&self, ctx: &PrecisionContext) -> Vec<Real> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .find(|(c, _)| *c == i)
                    .map_or_else(|| ctx.zero(), |(_, v)| v.clone())
            })
            .collect()
    }

    /// Solves `A x = b` with a dense `LDL^T` factorization at the working
    /// precision. Cubic cost; meant for computing reference solutions.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_dense(&self, b: &[Real], ctx: &PrecisionContext) -> Result<Vec<Real>, KrylovError> {
        let n = self.n;
        if b.len() != n {
            return Err(KrylovError::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut a: Vec<Vec<Real>> = vec![vec![ctx.zero(); n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                a[i][*j] = ctx.round(v);
            }
        }
        // In-place LDL^T: strictly lower part holds L, diagonal holds D.
        for j in 0..n {
            let mut d = a[j][j].clone();
            for k in 0..j {
                d -= &a[j][k] * &a[j][k] * &a[k][k];
            }
            if !d.is_positive() {
                return Err(crate::numerics::NumericsError::NotPositiveDefinite { index: j }.into());
            }
            a[j][j] = d;
            for i in j + 1..n {
                let mut s = a[i][j].clone();
                for k in 0..j {
                    s -= &a[i][k] * &a[j][k] * &a[k][k];
                }
                a[i][j] = s / &a[j][j];
            }
        }
        let mut y: Vec<Real> = b.iter().map(|x| ctx.round(x)).collect();
        for i in 0..n {
            for k in 0..i {
                let t = &a[i][k] * &y[k];
                y[i] -= t;
            }
        }
        for i in 0..n {
            y[i] = &y[i] / &a[i][i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = &a[k][i] * &y[k];
                y[i] -= t;
            }
        }
        Ok(y)
    }
}

impl LinearOperator for SparseSymmetric {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[Real]) -> Vec<Real> {
        assert_eq!(x.len(), self.n);
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut it = row.iter();
                match it.next() {
                    None => x[i].zero_like(),
                    Some((c, v)) => {
                        let mut acc = v * &x[*c];
                        for (c, v) in it {
                            acc += v * &x[*c];
                        }
                        acc
                    }
                }
            })
            .collect()
    }

    fn norm_inf(&self) -> Real {
        self.rows
            .iter()
            .filter_map(|row| row.iter().map(|(_, v)| v.abs()).reduce(|a, b| a + b))
            .reduce(Real::max)
            .expect("matrix with at least one entry")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_matches_jacobi() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let t = JacobiMatrix::new(
            vec![ctx.int(4), ctx.int(3), ctx.int(5)],
            vec![ctx.one(), ctx.int(2)],
        )
        .unwrap();
        let s = SparseSymmetric::from_jacobi(&t);
        let x = vec![ctx.one(), ctx.int(-2), ctx.int(3)];
        assert_eq!(s.apply(&x), t.apply(&x));
        assert_eq!(LinearOperator::norm_inf(&s), LinearOperator::norm_inf(&t));
        assert_eq!(s.nnz_lower(), 5);
        let sol = s.solve_dense(&x, &ctx).unwrap();
        let back = t.apply(&sol);
        for (a, b) in back.iter().zip(&x) {
            assert!(a.rel_diff(b) < ctx.tolerance());
        }
    }

    #[test]
    fn dense_solve_rejects_indefinite() {
        let ctx = PrecisionContext::native();
        let s = SparseSymmetric::from_triplets(
            2,
            vec![(0, 0, ctx.one()), (1, 1, ctx.one()), (1, 0, ctx.int(2))],
        );
        assert!(s.solve_dense(&[ctx.one(), ctx.one()], &ctx).is_err());
    }
}
