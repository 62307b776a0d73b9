use crate::numerics::{vector, JacobiMatrix, NumericsError, PrecisionContext, Real};

use super::{KrylovError, LinearOperator};

/// Lanczos iteration state after `k` steps: `T_k`, the current vector
/// `v_{k+1}` and optionally the whole basis.
#[derive(Clone, Debug)]
pub struct LanczosState {
    alphas: Vec<Real>,
    betas: Vec<Real>,
    v: Vec<Real>,
    v_prev: Option<Vec<Real>>,
    basis: Option<Vec<Vec<Real>>>,
    reorthogonalize: bool,
    /// `beta_k` at which the grade was detected.
    terminal_beta: Option<Real>,
}

impl LanczosState {
    /// Normalizes `start`. `retain_basis` keeps `v_1, v_2, ...`;
    /// `reorthogonalize` adds full Gram-Schmidt against the retained basis
    /// (implies `retain_basis`).
    pub fn new(start: &[Real], retain_basis: bool, reorthogonalize: bool) -> Result<Self, KrylovError> {
        if start.is_empty() {
            return Err(KrylovError::ZeroStart);
        }
        let norm = vector::norm2(start);
        if !norm.is_positive() {
            return Err(KrylovError::ZeroStart);
        }
        let v = vector::scale(&norm.recip(), start);
        let keep = retain_basis || reorthogonalize;
        Ok(Self {
            alphas: Vec::new(),
            betas: Vec::new(),
            basis: keep.then(|| vec![v.clone()]),
            v,
            v_prev: None,
            reorthogonalize,
            terminal_beta: None,
        })
    }

    /// Number of completed steps.
    pub fn steps(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[Real] {
        &self.alphas
    }

    /// `beta_1 .. beta_k` (the last one couples `T_k` to `v_{k+1}`).
    pub fn betas(&self) -> &[Real] {
        &self.betas
    }

    pub fn is_terminated(&self) -> bool {
        self.terminal_beta.is_some()
    }

    pub fn terminal_beta(&self) -> Option<&Real> {
        self.terminal_beta.as_ref()
    }

    /// `v_{k+1}`
    pub fn current_vector(&self) -> &[Real] {
        &self.v
    }

    pub fn basis(&self) -> Option<&[Vec<Real>]> {
        self.basis.as_deref()
    }

    /// `T_k`
    pub fn jacobi(&self) -> Result<JacobiMatrix, NumericsError> {
        let k = self.steps();
        if k == 0 {
            return Err(NumericsError::Empty);
        }
        JacobiMatrix::new(self.alphas.clone(), self.betas[..k - 1].to_vec())
    }
}

/// One Lanczos step: appends `alpha_k`, `beta_k` and `v_{k+1}`.
///
/// When `beta_k <= 10^-(D-4) ||A||` the Krylov space is invariant: the
/// returned state is terminal and keeps `alpha_k` only.
pub fn lanczos_step<Op: LinearOperator + ?Sized>(
    mut state: LanczosState,
    op: &Op,
    ctx: &PrecisionContext,
) -> Result<LanczosState, KrylovError> {
    if state.is_terminated() {
        return Err(KrylovError::GradeReached { k: state.steps() });
    }
    if state.v.len() != op.dim() {
        return Err(KrylovError::DimensionMismatch {
            expected: op.dim(),
            found: state.v.len(),
        });
    }
    let mut w = op.apply(&state.v);
    if let (Some(prev), Some(beta)) = (&state.v_prev, state.betas.last()) {
        vector::axpy(&-beta, prev, &mut w);
    }
    let alpha = vector::dot(&state.v, &w);
    vector::axpy(&-&alpha, &state.v, &mut w);
    if state.reorthogonalize {
        if let Some(basis) = &state.basis {
            for u in basis {
                let h = vector::dot(u, &w);
                vector::axpy(&-h, u, &mut w);
            }
        }
    }
    state.alphas.push(alpha);
    let beta = vector::norm2(&w);
    let threshold = ctx.tolerance_with_guard(4) * op.norm_inf();
    if beta <= threshold {
        state.terminal_beta = Some(beta);
        return Ok(state);
    }
    let next = vector::scale(&beta.recip(), &w);
    state.betas.push(beta);
    if let Some(basis) = &mut state.basis {
        basis.push(next.clone());
    }
    state.v_prev = Some(std::mem::replace(&mut state.v, next));
    Ok(state)
}
