use std::sync::OnceLock;

use crate::krylov::{cg_to_lanczos, CgTrace};
use crate::numerics::{eig_tridiagonal, EigenDecomposition, JacobiMatrix, NumericsError, PrecisionContext, Real};

use super::AnalysisError;

/// Eigendecompositions of the leading blocks `T_1, T_2, ...` of one Jacobi
/// matrix, computed on first use. Each costs `O(k^2)`; safe to share
/// between threads.
pub struct RitzCache {
    t: JacobiMatrix,
    ctx: PrecisionContext,
    cells: Vec<OnceLock<Result<EigenDecomposition, NumericsError>>>,
}

impl RitzCache {
    pub fn new(t: JacobiMatrix, ctx: PrecisionContext) -> Self {
        let cells = (0..t.order()).map(|_| OnceLock::new()).collect();
        Self { t, ctx, cells }
    }

    /// Cache over `T_K`, `K` the trace length.
    pub fn from_trace(trace: &CgTrace, ctx: PrecisionContext) -> Result<Self, AnalysisError> {
        Ok(Self::new(cg_to_lanczos(trace, trace.len())?, ctx))
    }

    pub fn max_order(&self) -> usize {
        self.t.order()
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    fn check(&self, k: usize) -> Result<(), AnalysisError> {
        if k == 0 || k > self.max_order() {
            return Err(AnalysisError::OrderOutOfRange {
                k,
                max: self.max_order(),
            });
        }
        Ok(())
    }

    /// `T_k`
    pub fn jacobi(&self, k: usize) -> Result<JacobiMatrix, AnalysisError> {
        self.check(k)?;
        Ok(self.t.leading(k))
    }

    /// `beta_k`, coupling `T_k` to row `k+1` (`k < max_order`).
    pub fn beta(&self, k: usize) -> Result<&Real, AnalysisError> {
        self.check(k)?;
        self.t.betas().get(k - 1).ok_or(AnalysisError::OrderOutOfRange {
            k: k + 1,
            max: self.max_order(),
        })
    }

    /// `alpha_k`
    pub fn alpha(&self, k: usize) -> Result<&Real, AnalysisError> {
        self.check(k)?;
        Ok(&self.t.alphas()[k - 1])
    }

    pub fn get(&self, k: usize) -> Result<&EigenDecomposition, AnalysisError> {
        self.check(k)?;
        self.cells[k - 1]
            .get_or_init(|| eig_tridiagonal(&self.t.leading(k), &self.ctx))
            .as_ref()
            .map_err(|e| AnalysisError::Numerics(e.clone()))
    }

    /// `theta_1^{(k)}`
    pub fn theta1(&self, k: usize) -> Result<&Real, AnalysisError> {
        Ok(self.get(k)?.smallest())
    }
}
