#![allow(dead_code)]

pub mod checks;

use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use radau_cg::analysis::RitzCache;
use radau_cg::bounds::{BoundSeries, MuEstimator};
use radau_cg::krylov::{CgTrace, ConjugateGradient};
use radau_cg::numerics::{eig_tridiagonal, JacobiMatrix, PrecisionContext, Real};
use radau_cg::spectrum::{build_model_problem, ModelParams, ModelProblem};

/// The reference model problem run to the end, with the four reference `mu`s.
pub struct ModelRun {
    pub ctx: PrecisionContext,
    pub problem: ModelProblem,
    pub trace: CgTrace,
    pub cache: RitzCache,
    pub series: Vec<BoundSeries>,
    /// Ascending eigenvalues of `A`.
    pub eigenvalues: Vec<Real>,
}

impl ModelRun {
    pub fn new(digits: u32) -> Self {
        let ctx = PrecisionContext::with_digits(digits).unwrap();
        let problem = build_model_problem(&ModelParams::reference(), &ctx).unwrap();
        let mut cg = ConjugateGradient::new(&problem.a, &problem.b, &ctx)
            .unwrap()
            .with_exact_solution(problem.exact_solution.clone());
        cg.run(problem.order()).unwrap();
        let trace = cg.into_trace();
        let cache = RitzCache::from_trace(&trace, ctx).unwrap();
        let series = reference_mus(&ctx, &problem.lambda_min)
            .into_iter()
            .map(|(l, m)| MuEstimator::from_records(l, m, trace.records()))
            .collect();
        let eigenvalues = eig_tridiagonal(&problem.a, &ctx).unwrap().thetas;
        Self { ctx, problem, trace, cache, series, eigenvalues }
    }

    pub fn lambda1(&self) -> &Real {
        &self.problem.lambda_min
    }

    pub fn series(&self, label: &str) -> &BoundSeries {
        self.series.iter().find(|s| s.label == label).unwrap()
    }
}

/// Shared 128-digit run; building it once keeps the debug test suite fast.
pub fn reference_run() -> &'static ModelRun {
    static RUN: OnceLock<ModelRun> = OnceLock::new();
    RUN.get_or_init(|| ModelRun::new(128))
}

pub fn reference_mus(ctx: &PrecisionContext, l1: &Real) -> Vec<(&'static str, Real)> {
    vec![
        ("mu3", (ctx.one() - ctx.pow10(-3)) * l1),
        ("mu8", (ctx.one() - ctx.pow10(-8)) * l1),
        ("mu16", l1.native_floor()),
        ("mu50", (ctx.one() - ctx.pow10(-50)) * l1),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random diagonally dominant Jacobi matrix (hence positive definite).
pub fn random_jacobi<R: Rng>(rng: &mut R, n: usize, ctx: &PrecisionContext) -> JacobiMatrix {
    let betas: Vec<Real> = (0..n - 1).map(|_| ctx.real(rng.gen_range(0.05..1.0))).collect();
    let alphas = (0..n)
        .map(|i| {
            let left = if i > 0 { betas[i - 1].clone() } else { ctx.zero() };
            let right = if i + 1 < n { betas[i].clone() } else { ctx.zero() };
            left + right + ctx.real(rng.gen_range(0.01..3.0))
        })
        .collect();
    JacobiMatrix::new(alphas, betas).unwrap()
}

/// `||T|| / (theta_1 - mu)`: how much rounding errors of size `u` grow in
/// the spectral identities.
pub fn conditioning(t: &JacobiMatrix, theta1: &Real, mu: &Real) -> Real {
    t.norm_inf() / (theta1 - mu)
}

pub fn max_of(xs: impl IntoIterator<Item = Real>, ctx: &PrecisionContext) -> Real {
    xs.into_iter().fold(ctx.zero(), Real::max)
}
