//! Symmetric tridiagonal (Jacobi) matrices: eigendecomposition by implicit
//! QL with Wilkinson shifts, shifted solves and `LDL^T` factorization.

use super::{NumericsError, PrecisionContext, Real};

/// Symmetric tridiagonal matrix with strictly positive off-diagonal.
///
/// `alphas` is the diagonal `a_1..a_k`, `betas` the off-diagonal
/// `b_1..b_{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiMatrix {
    alphas: Vec<Real>,
    betas: Vec<Real>,
}

impl JacobiMatrix {
    pub fn new(alphas: Vec<Real>, betas: Vec<Real>) -> Result<Self, NumericsError> {
        if alphas.is_empty() {
            return Err(NumericsError::Empty);
        }
        if betas.len() + 1 != alphas.len() {
            return Err(NumericsError::ShapeMismatch {
                alphas: alphas.len(),
                betas: betas.len(),
            });
        }
        if let Some(index) = betas.iter().position(|b| !b.is_positive()) {
            return Err(NumericsError::NonPositiveBeta { index });
        }
        Ok(Self { alphas, betas })
    }

    /// One-by-one matrix `[alpha]`.
    pub fn scalar(alpha: Real) -> Self {
        Self {
            alphas: vec![alpha],
            betas: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Real] {
        &self.alphas
    }

    pub fn betas(&self) -> &[Real] {
        &self.betas
    }

    /// Leading principal submatrix of order `k` (`1 <= k <= order`).
    pub fn leading(&self, k: usize) -> JacobiMatrix {
        assert!(k >= 1 && k <= self.order(), "leading order {k} out of range");
        JacobiMatrix {
            alphas: self.alphas[..k].to_vec(),
            betas: self.betas[..k - 1].to_vec(),
        }
    }

    /// Appends a row/column: `beta` couples the old last index to the new
    /// diagonal entry `alpha`.
    pub fn extended(&self, beta: Real, alpha: Real) -> Result<JacobiMatrix, NumericsError> {
        if !beta.is_positive() {
            return Err(NumericsError::NonPositiveBeta {
                index: self.betas.len(),
            });
        }
        let mut out = self.clone();
        out.betas.push(beta);
        out.alphas.push(alpha);
        Ok(out)
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> Real {
        let n = self.order();
        (0..n)
            .map(|i| {
                let mut s = self.alphas[i].abs();
                if i > 0 {
                    s += self.betas[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.betas[i].abs();
                }
                s
            })
            .reduce(Real::max)
            .expect("nonempty matrix")
    }

    /// Entrywise rounding to binary64, represented in `ctx`.
    pub fn to_native(&self, ctx: &PrecisionContext) -> JacobiMatrix {
        JacobiMatrix {
            alphas: self.alphas.iter().map(|a| ctx.round(&a.to_native())).collect(),
            betas: self.betas.iter().map(|b| ctx.round(&b.to_native())).collect(),
        }
    }

    /// Re-rounds every entry to `ctx`.
    pub fn rounded(&self, ctx: &PrecisionContext) -> JacobiMatrix {
        JacobiMatrix {
            alphas: self.alphas.iter().map(|a| ctx.round(a)).collect(),
            betas: self.betas.iter().map(|b| ctx.round(b)).collect(),
        }
    }

    /// `T x`
    pub fn mul_vec(&self, x: &[Real]) -> Vec<Real> {
        let n = self.order();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut y = &self.alphas[i] * &x[i];
                if i > 0 {
                    y += &self.betas[i - 1] * &x[i - 1];
                }
                if i + 1 < n {
                    y += &self.betas[i] * &x[i + 1];
                }
                y
            })
            .collect()
    }
}

/// Spectral decomposition `T = S diag(theta) S^T` restricted to what the
/// bounds need: the Ritz values and the first and last rows of `S`.
///
/// Eigenvectors are normalized with a nonnegative first component.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending eigenvalues.
    pub thetas: Vec<Real>,
    /// `S[0, i]`; their squares are the Gauss quadrature weights.
    pub first_components: Vec<Real>,
    /// `S[k-1, i]`.
    pub last_components: Vec<Real>,
    /// Full eigenvectors (`vectors[i]` belongs to `thetas[i]`), when requested.
    pub vectors: Option<Vec<Vec<Real>>>,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.thetas.len()
    }

    pub fn smallest(&self) -> &Real {
        &self.thetas[0]
    }
}

/// Eigenvalues plus first/last eigenvector components.
pub fn eig_tridiagonal(
    t: &JacobiMatrix,
    ctx: &PrecisionContext,
) -> Result<EigenDecomposition, NumericsError> {
    let n = t.order();
    let rows = if n == 1 { vec![0] } else { vec![0, n - 1] };
    let (thetas, tracked) = implicit_ql(t, ctx, &rows)?;
    let (first, last) = if n == 1 {
        (tracked[0].clone(), tracked[0].clone())
    } else {
        (tracked[0].clone(), tracked[1].clone())
    };
    Ok(EigenDecomposition {
        thetas,
        first_components: first,
        last_components: last,
        vectors: None,
    })
}

/// Like [`eig_tridiagonal`] but also returns every eigenvector.
pub fn eig_tridiagonal_full(
    t: &JacobiMatrix,
    ctx: &PrecisionContext,
) -> Result<EigenDecomposition, NumericsError> {
    let n = t.order();
    let rows: Vec<usize> = (0..n).collect();
    let (thetas, tracked) = implicit_ql(t, ctx, &rows)?;
    let vectors = (0..n)
        .map(|i| (0..n).map(|r| tracked[r][i].clone()).collect())
        .collect();
    Ok(EigenDecomposition {
        thetas,
        first_components: tracked[0].clone(),
        last_components: tracked[n - 1].clone(),
        vectors: Some(vectors),
    })
}

/// Implicit QL iteration with Wilkinson shifts (the `tqli` scheme).
///
/// The rotations act on the columns of the eigenvector matrix, so each row
/// can be tracked independently; only the rows listed in `rows` are formed.
/// Returns ascending eigenvalues and, for every tracked row, its entries in
/// the matching order.
fn implicit_ql(
    t: &JacobiMatrix,
    ctx: &PrecisionContext,
    rows: &[usize],
) -> Result<(Vec<Real>, Vec<Vec<Real>>), NumericsError> {
    let n = t.order();
    let mut d: Vec<Real> = t.alphas.iter().map(|a| ctx.round(a)).collect();
    let mut e: Vec<Real> = t.betas.iter().map(|b| ctx.round(b)).collect();
    e.push(ctx.zero());
    let mut z: Vec<Vec<Real>> = rows
        .iter()
        .map(|&r| {
            (0..n)
                .map(|c| if c == r { ctx.one() } else { ctx.zero() })
                .collect()
        })
        .collect();

    let eps = ctx.epsilon();
    let scale = (ctx.effective_digits() / 16).max(1) as usize;
    let cap = 50 * n * scale;
    let mut total_iter = 0usize;

    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= &eps * &dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            total_iter += 1;
            if total_iter > cap {
                return Err(NumericsError::NoConvergence { index: l, cap });
            }

            let two_e = &e[l] * 2.0;
            let mut g = (&d[l + 1] - &d[l]) / &two_e;
            let mut r = g.hypot(&ctx.one());
            g = &d[m] - &d[l] + &e[l] / (&g + r.with_sign_of(&g));
            let mut s = ctx.one();
            let mut c = ctx.one();
            let mut p = ctx.zero();
            let mut underflow = false;

            let mut i = m;
            while i > l {
                i -= 1;
                let f = &s * &e[i];
                let b = &c * &e[i];
                r = f.hypot(&g);
                e[i + 1] = r.clone();
                if r.is_zero() {
                    d[i + 1] -= &p;
                    e[m] = ctx.zero();
                    underflow = true;
                    break;
                }
                s = &f / &r;
                c = &g / &r;
                g = &d[i + 1] - &p;
                r = (&d[i] - &g) * &s + (&c * &b) * 2.0;
                p = &s * &r;
                d[i + 1] = &g + &p;
                g = &c * &r - &b;
                for zr in z.iter_mut() {
                    let f = zr[i + 1].clone();
                    zr[i + 1] = &s * &zr[i] + &c * &f;
                    zr[i] = &c * &zr[i] - &s * &f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= &p;
            e[l] = g;
            e[m] = ctx.zero();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    let thetas: Vec<Real> = order.iter().map(|&i| d[i].clone()).collect();

    // Sign convention: nonnegative first component. Row 0 is always tracked
    // first when present; otherwise fall back to the first tracked row.
    let signs: Vec<bool> = order.iter().map(|&i| z[0][i].is_negative()).collect();
    let tracked = z
        .iter()
        .map(|zr| {
            order
                .iter()
                .zip(&signs)
                .map(|(&i, &flip)| if flip { -&zr[i] } else { zr[i].clone() })
                .collect()
        })
        .collect();
    Ok((thetas, tracked))
}

/// `LDL^T` factorization of a tridiagonal matrix: unit lower bidiagonal
/// multipliers `l_j` and pivots `d_j`.
#[derive(Clone, Debug)]
pub struct LdlFactors {
    pub multipliers: Vec<Real>,
    pub pivots: Vec<Real>,
}

/// Factors `T - shift I`. Fails at the first nonpositive pivot.
fn ldl_shifted(t: &JacobiMatrix, shift: Option<&Real>) -> Result<LdlFactors, usize> {
    let n = t.order();
    let mut pivots = Vec::with_capacity(n);
    let mut multipliers = Vec::with_capacity(n.saturating_sub(1));
    let shifted = |i: usize| match shift {
        Some(mu) => &t.alphas[i] - mu,
        None => t.alphas[i].clone(),
    };
    let mut d = shifted(0);
    if !d.is_positive() {
        return Err(0);
    }
    for j in 0..n - 1 {
        let l = &t.betas[j] / &d;
        let next = shifted(j + 1) - &l * &t.betas[j];
        pivots.push(d);
        multipliers.push(l);
        if !next.is_positive() {
            return Err(j + 1);
        }
        d = next;
    }
    pivots.push(d);
    Ok(LdlFactors {
        multipliers,
        pivots,
    })
}

/// `T = L D L^T` for positive definite `T`.
///
/// When `T` comes from CG the pivots are `1/gamma_j` and the multipliers
/// `sqrt(delta_j)`.
pub fn ldl_tridiagonal(
    t: &JacobiMatrix,
    _ctx: &PrecisionContext,
) -> Result<LdlFactors, NumericsError> {
    ldl_shifted(t, None).map_err(|index| NumericsError::NotPositiveDefinite { index })
}

/// Solves `(T - mu I) y = rhs` through the `LDL^T` factors of `T - mu I`.
///
/// All pivots must be positive, i.e. `mu` below the spectrum of `T`.
pub fn solve_shifted(
    t: &JacobiMatrix,
    mu: &Real,
    rhs: &[Real],
    _ctx: &PrecisionContext,
) -> Result<Vec<Real>, NumericsError> {
    let n = t.order();
    if rhs.len() != n {
        return Err(NumericsError::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let f = ldl_shifted(t, Some(mu)).map_err(|index| NumericsError::ShiftNotBelowSpectrum { index })?;
    Ok(ldl_solve(&f, rhs))
}

/// Solves `L D L^T y = rhs`.
pub fn ldl_solve(f: &LdlFactors, rhs: &[Real]) -> Vec<Real> {
    let n = f.pivots.len();
    let mut y: Vec<Real> = rhs.to_vec();
    for j in 1..n {
        let t = &f.multipliers[j - 1] * &y[j - 1];
        y[j] -= t;
    }
    for (yj, dj) in y.iter_mut().zip(&f.pivots) {
        *yj = &*yj / dj;
    }
    for j in (0..n - 1).rev() {
        let t = &f.multipliers[j] * &y[j + 1];
        y[j] -= t;
    }
    y
}
