use std::io::{BufRead, Write};

use crate::krylov::CgRecord;
use crate::numerics::{PrecisionContext, Real};

use super::recurrences::gamma_mu_raw;
use super::{bounds_at, gamma_from_alpha, update_alpha_mu, update_phi, BoundsError};

pub const BOUNDS_HEADER: &str = "k,mu_label,gauss_lower,radau_upper,simple_upper";

/// Bounds and estimator internals at one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundRecord {
    pub k: usize,
    pub gauss_lower: Real,
    pub radau_upper: Real,
    pub simple_upper: Real,
    /// `gamma_k^(mu)`
    pub gamma_mu: Real,
    /// `alpha_{k+1}^(mu)` from the mirror recurrence, when it was defined.
    pub alpha_mu_next: Option<Real>,
    /// `phi_k`
    pub phi: Real,
    /// Relative gap between the two routes to `gamma_k^(mu)`.
    pub cross_check: Option<Real>,
    /// False from the first iteration where `mu` was found not below the
    /// smallest Ritz value.
    pub trusted: bool,
}

/// Everything one estimator produced.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundSeries {
    pub label: String,
    pub mu: Real,
    pub records: Vec<BoundRecord>,
}

impl BoundSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// First untrusted iteration.
    pub fn invalid_since(&self) -> Option<usize> {
        self.records.iter().find(|r| !r.trusted).map(|r| r.k)
    }

    /// Largest cross-check gap seen so far.
    pub fn max_cross_check(&self) -> Option<Real> {
        self.records
            .iter()
            .filter_map(|r| r.cross_check.clone())
            .reduce(Real::max)
    }
}

/// Gauss-Radau estimator for one prescribed `mu`.
///
/// Fed one CG record at a time. `gamma^(mu)` is updated by the direct
/// recurrence; the `alpha^(mu)` recurrence runs next to it as a check.
/// If `mu` turns out not to be below the smallest Ritz value the estimator
/// keeps producing numbers but marks them untrusted.
#[derive(Clone, Debug)]
pub struct MuEstimator {
    series: BoundSeries,
    gamma_prev: Option<Real>,
    /// `alpha_k` of `T`, built from the records seen so far.
    alpha_t: Option<Real>,
    alpha_mu: Option<Real>,
    gamma_mu: Real,
    phi: Real,
    trusted: bool,
}

impl MuEstimator {
    pub fn new(label: impl Into<String>, mu: Real) -> Self {
        Self {
            gamma_mu: mu.recip(),
            phi: mu.one_like(),
            alpha_mu: Some(mu.clone()),
            series: BoundSeries {
                label: label.into(),
                mu,
                records: Vec::new(),
            },
            gamma_prev: None,
            alpha_t: None,
            trusted: true,
        }
    }

    pub fn label(&self) -> &str {
        &self.series.label
    }

    pub fn mu(&self) -> &Real {
        &self.series.mu
    }

    pub fn is_trusted(&self) -> bool {
        self.trusted
    }

    pub fn series(&self) -> &BoundSeries {
        &self.series
    }

    pub fn into_series(self) -> BoundSeries {
        self.series
    }

    /// Consumes record `k` (records must arrive in order).
    pub fn observe(&mut self, rec: &CgRecord) -> &BoundRecord {
        let k = self.series.records.len();
        assert_eq!(rec.k, k, "records must be fed in order");
        let mu = self.series.mu.clone();

        let alpha_mu_next;
        if let Some(gp) = &self.gamma_prev {
            if self.gamma_mu <= *gp {
                self.trusted = false;
            }
            self.gamma_mu = gamma_mu_raw(&self.gamma_mu, gp, &rec.delta, &mu);
            self.phi = update_phi(&self.phi, &rec.delta);
            let beta2 = &rec.delta / &gp.square();
            alpha_mu_next = match (&self.alpha_mu, &self.alpha_t) {
                (Some(am), Some(at)) => update_alpha_mu(am, at, &beta2, &mu).ok(),
                _ => None,
            };
        } else {
            alpha_mu_next = self.alpha_mu.clone();
        }
        if !self.gamma_mu.is_positive() || self.gamma_mu < rec.gamma {
            self.trusted = false;
        }

        let cross_check = alpha_mu_next.as_ref().and_then(|a| {
            let g = match &self.gamma_prev {
                Some(gp) => gamma_from_alpha(a, &rec.delta, gp),
                None => gamma_from_alpha(a, &rec.delta, &rec.gamma),
            };
            g.ok().map(|g| g.rel_diff(&self.gamma_mu))
        });
        // alpha_{k+1} of T for the next step
        self.alpha_t = Some(match &self.gamma_prev {
            Some(gp) => rec.gamma.recip() + &rec.delta / gp,
            None => rec.gamma.recip(),
        });
        self.alpha_mu = alpha_mu_next.clone();
        self.gamma_prev = Some(rec.gamma.clone());

        let b = bounds_at(&rec.rnorm2, &rec.gamma, &self.gamma_mu, &self.phi, &mu);
        self.series.records.push(BoundRecord {
            k,
            gauss_lower: b.gauss_lower,
            radau_upper: b.radau_upper,
            simple_upper: b.simple_upper,
            gamma_mu: self.gamma_mu.clone(),
            alpha_mu_next,
            phi: self.phi.clone(),
            cross_check,
            trusted: self.trusted,
        });
        self.series.records.last().expect("just pushed")
    }

    /// Runs over a whole trace.
    pub fn from_records<'a>(
        label: impl Into<String>,
        mu: Real,
        records: impl IntoIterator<Item = &'a CgRecord>,
    ) -> BoundSeries {
        let mut est = Self::new(label, mu);
        for r in records {
            est.observe(r);
        }
        est.into_series()
    }
}

/// Writes all series into one CSV, series after series.
pub fn write_bounds_csv<W: Write>(
    mut out: W,
    series: &[BoundSeries],
    digits: usize,
) -> std::io::Result<()> {
    writeln!(out, "{BOUNDS_HEADER}")?;
    for s in series {
        for r in &s.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.k,
                s.label,
                r.gauss_lower.to_decimal(digits),
                r.radau_upper.to_decimal(digits),
                r.simple_upper.to_decimal(digits)
            )?;
        }
    }
    Ok(())
}

/// One bounds row as read back from CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundsRow {
    pub k: usize,
    pub mu_label: String,
    pub gauss_lower: Real,
    pub radau_upper: Real,
    pub simple_upper: Real,
}

pub fn read_bounds_csv<R: BufRead>(
    input: R,
    ctx: &PrecisionContext,
) -> Result<Vec<BoundsRow>, BoundsError> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != BOUNDS_HEADER {
        return Err(BoundsError::Format {
            line: 1,
            message: format!("expected header `{BOUNDS_HEADER}`"),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| BoundsError::Format { line: i + 2, message };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(bad(format!("expected 5 fields, found {}", f.len())));
        }
        let num = |s: &str| ctx.parse(s).map_err(|e| bad(e.to_string()));
        rows.push(BoundsRow {
            k: f[0].parse().map_err(|_| bad(format!("bad index {:?}", f[0])))?,
            mu_label: f[1].to_string(),
            gauss_lower: num(f[2])?,
            radau_upper: num(f[3])?,
            simple_upper: num(f[4])?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::{ConjugateGradient, SparseSymmetric};

    #[test]
    fn identity_problem_bounds_collapse() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let a = SparseSymmetric::from_triplets(2, vec![(0, 0, ctx.one()), (1, 1, ctx.one())]);
        let b = vec![ctx.one(), ctx.zero()];
        let mut cg = ConjugateGradient::new(&a, &b, &ctx)
            .unwrap()
            .with_exact_solution(b.clone());
        cg.step().unwrap();
        let mut est = MuEstimator::new("one", ctx.one());
        let rec = est.observe(&cg.trace().records()[0]).clone();
        let err = cg.trace().records()[0].true_err2.clone().unwrap();
        assert_eq!(err, ctx.one());
        assert_eq!(rec.gauss_lower, err);
        assert_eq!(rec.radau_upper, err);
        assert_eq!(rec.simple_upper, err);
        assert!(rec.trusted);
    }

    #[test]
    fn mu_above_spectrum_is_flagged_not_fatal() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let a = SparseSymmetric::from_triplets(
            3,
            vec![(0, 0, ctx.one()), (1, 1, ctx.int(2)), (2, 2, ctx.int(3))],
        );
        let b = vec![ctx.one(); 3];
        let mut cg = ConjugateGradient::new(&a, &b, &ctx).unwrap();
        cg.run(3).unwrap();
        let s = MuEstimator::from_records("bad", ctx.int(2), cg.trace().records());
        assert_eq!(s.len(), 3);
        assert!(s.invalid_since().is_some());
        let ok = MuEstimator::from_records("ok", ctx.ratio(1, 2), cg.trace().records());
        assert!(ok.invalid_since().is_none());
        assert!(ok.max_cross_check().unwrap() < ctx.tolerance());
    }

    #[test]
    fn csv_roundtrip() {
        let ctx = PrecisionContext::with_digits(30).unwrap();
        let a = SparseSymmetric::from_triplets(2, vec![(0, 0, ctx.one()), (1, 1, ctx.int(4))]);
        let mut cg = ConjugateGradient::new(&a, &[ctx.one(), ctx.one()], &ctx).unwrap();
        cg.run(2).unwrap();
        let s = MuEstimator::from_records("half", ctx.ratio(1, 2), cg.trace().records());
        let mut buf = Vec::new();
        write_bounds_csv(&mut buf, std::slice::from_ref(&s), 30).unwrap();
        let rows = read_bounds_csv(buf.as_slice(), &ctx).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].mu_label, "half");
        assert!(rows[1].radau_upper.rel_diff(&s.records[1].radau_upper) < ctx.pow10(-28));
    }
}
