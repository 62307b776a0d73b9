use crate::numerics::{PrecisionContext, Real};

use super::SpectrumError;

/// Stepwise constant distribution function: strictly ascending points of
/// increase with positive jumps summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionFunction {
    nodes: Vec<Real>,
    weights: Vec<Real>,
}

impl DistributionFunction {
    pub fn new(
        nodes: Vec<Real>,
        weights: Vec<Real>,
        ctx: &PrecisionContext,
    ) -> Result<Self, SpectrumError> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(SpectrumError::InvalidParameter(format!(
                "{} nodes vs {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[0] >= w[1]) {
            return Err(SpectrumError::NonMonotoneNodes { index: i + 1 });
        }
        if let Some(index) = weights.iter().position(|w| !w.is_positive()) {
            return Err(SpectrumError::NonPositiveWeight { index });
        }
        let sum: Real = weights.iter().cloned().sum();
        if sum.rel_diff(&ctx.one()) > ctx.tolerance() {
            return Err(SpectrumError::WeightSum {
                sum: sum.to_decimal(20),
            });
        }
        Ok(Self { nodes, weights })
    }

    /// Equal weights `1/m` on the given nodes.
    pub fn uniform(nodes: Vec<Real>, ctx: &PrecisionContext) -> Result<Self, SpectrumError> {
        let w = ctx.ratio(1, nodes.len() as i64);
        let weights = vec![w; nodes.len()];
        Self::new(nodes, weights, ctx)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Real] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Real] {
        &self.weights
    }

    /// `int lambda^j d omega`
    pub fn moment(&self, j: i32) -> Real {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * x.powi(j))
            .sum()
    }
}

/// Strakoš nodes: `l_1`, then `l_1 + (i-1)/(m-1) (l_m - l_1) rho^(m-i)`.
pub fn strakos_nodes(
    m: usize,
    lam1: &Real,
    lamm: &Real,
    rho: &Real,
    ctx: &PrecisionContext,
) -> Result<Vec<Real>, SpectrumError> {
    if m < 2 {
        return Err(SpectrumError::InvalidParameter(format!("m = {m} < 2")));
    }
    if lam1.is_negative() || lam1 >= lamm {
        return Err(SpectrumError::InvalidParameter(
            "need 0 <= lambda_1 < lambda_m".into(),
        ));
    }
    if !rho.is_positive() || *rho > 1.0 {
        return Err(SpectrumError::InvalidParameter("need 0 < rho <= 1".into()));
    }
    let span = lamm - lam1;
    let denom = (m - 1) as i64;
    let mut nodes = vec![ctx.round(lam1)];
    for i in 2..=m {
        let frac = ctx.ratio((i - 1) as i64, denom);
        let node = lam1 + frac * &span * rho.powi((m - i) as i32);
        nodes.push(node);
    }
    if let Some(i) = nodes.windows(2).position(|w| w[0] >= w[1]) {
        return Err(SpectrumError::NonMonotoneNodes { index: i + 1 });
    }
    Ok(nodes)
}

/// Cluster sizes growing linearly from 1 to `p`:
/// `round((p-1)/(m-1) i + (m-p)/(m-1))`, rounding halves away from zero.
pub fn cluster_sizes(m: usize, p: usize) -> Vec<usize> {
    if m == 1 {
        return vec![p.max(1)];
    }
    let den = (m - 1) as u64;
    (1..=m as u64)
        .map(|i| {
            // numerator of (p-1) i + (m-p), nonnegative for 1 <= i <= m and p >= 1
            let num = (p as i64 - 1) * i as i64 + (m as i64 - p as i64);
            debug_assert!(num >= 0);
            ((2 * num as u64 + den) / (2 * den)) as usize
        })
        .collect()
}

/// Replaces node `i` by `c_i` equally weighted nodes spread uniformly over
/// `[node_i - delta, node_i + delta]` (endpoints included); a cluster of size
/// one stays at `node_i`.
pub fn blur(
    base: &DistributionFunction,
    delta: &Real,
    p: usize,
    ctx: &PrecisionContext,
) -> Result<DistributionFunction, SpectrumError> {
    if p == 0 {
        return Err(SpectrumError::InvalidParameter("p must be >= 1".into()));
    }
    if !delta.is_positive() {
        return Err(SpectrumError::InvalidParameter("delta must be > 0".into()));
    }
    let sizes = cluster_sizes(base.len(), p);
    let extent = |i: usize| -> (Real, Real) {
        let x = &base.nodes[i];
        if sizes[i] > 1 {
            (x - delta, x + delta)
        } else {
            (x.clone(), x.clone())
        }
    };
    for i in 0..base.len().saturating_sub(1) {
        if extent(i).1 >= extent(i + 1).0 {
            return Err(SpectrumError::OverlappingClusters {
                left: i,
                right: i + 1,
            });
        }
    }

    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (i, &c) in sizes.iter().enumerate() {
        let centre = &base.nodes[i];
        let w = &base.weights[i] / ctx.int(c as i64);
        if c == 1 {
            nodes.push(centre.clone());
            weights.push(w);
            continue;
        }
        let lo = centre - delta;
        for j in 0..c {
            let step = ctx.ratio(2 * j as i64, (c - 1) as i64);
            nodes.push(&lo + step * delta);
            weights.push(w.clone());
        }
    }
    DistributionFunction::new(nodes, weights, ctx)
}
