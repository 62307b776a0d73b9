//! Per-iteration CG records and their CSV form.
//!
//! CSV header: `k,gamma,delta,rnorm2,true_err2`. `true_err2` is left empty
//! when the exact solution is unknown.

use std::io::{BufRead, Write};

use crate::numerics::{eig_tridiagonal, PrecisionContext, Real};

use super::{cg_to_lanczos, KrylovError};

pub const TRACE_HEADER: &str = "k,gamma,delta,rnorm2,true_err2";

/// Record `k`: `gamma_k`, `delta_k` (zero at `k = 0`), `||r_k||^2` and
/// `||x - x_k||_A^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CgRecord {
    pub k: usize,
    pub gamma: Real,
    pub delta: Real,
    pub rnorm2: Real,
    pub true_err2: Option<Real>,
    /// Smallest eigenvalue of `T_k`, when computed.
    pub theta1: Option<Real>,
}

/// Append-only sequence of records `0, 1, 2, ...`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CgTrace {
    records: Vec<CgRecord>,
}

impl CgTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record; its `k` must equal the current length.
    pub fn push(&mut self, record: CgRecord) {
        assert_eq!(record.k, self.records.len(), "trace records must be consecutive");
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[CgRecord] {
        &self.records
    }

    pub fn get(&self, k: usize) -> Option<&CgRecord> {
        self.records.get(k)
    }

    pub fn gammas(&self) -> Vec<Real> {
        self.records.iter().map(|r| r.gamma.clone()).collect()
    }

    pub fn deltas(&self) -> Vec<Real> {
        self.records.iter().map(|r| r.delta.clone()).collect()
    }

    pub fn rnorm2s(&self) -> Vec<Real> {
        self.records.iter().map(|r| r.rnorm2.clone()).collect()
    }

    /// All true errors, or `None` if any is missing.
    pub fn true_err2s(&self) -> Option<Vec<Real>> {
        self.records.iter().map(|r| r.true_err2.clone()).collect()
    }

    /// Keeps records `0..k`.
    pub fn truncated(&self, k: usize) -> CgTrace {
        CgTrace {
            records: self.records[..k.min(self.len())].to_vec(),
        }
    }

    /// `theta_1^{(k)}`, the smallest eigenvalue of `T_k` (`k >= 1`).
    pub fn theta1(&self, k: usize, ctx: &PrecisionContext) -> Result<Real, KrylovError> {
        let t = cg_to_lanczos(self, k)?;
        Ok(eig_tridiagonal(&t, ctx)?.thetas[0].clone())
    }

    /// Fills `theta1` of every record `k >= 1`.
    pub fn fill_theta1(&mut self, ctx: &PrecisionContext) -> Result<(), KrylovError> {
        for k in 1..self.len() {
            if self.records[k].theta1.is_none() {
                let th = self.theta1(k, ctx)?;
                self.records[k].theta1 = Some(th);
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W, digits: usize) -> std::io::Result<()> {
        writeln!(out, "{TRACE_HEADER}")?;
        for r in &self.records {
            let err = r
                .true_err2
                .as_ref()
                .map(|e| e.to_decimal(digits))
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{}",
                r.k,
                r.gamma.to_decimal(digits),
                r.delta.to_decimal(digits),
                r.rnorm2.to_decimal(digits),
                err
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R, ctx: &PrecisionContext) -> Result<CgTrace, KrylovError> {
        let mut lines = input.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim() != TRACE_HEADER {
            return Err(KrylovError::TraceFormat {
                line: 1,
                message: format!("expected header `{TRACE_HEADER}`"),
            });
        }
        let mut trace = CgTrace::new();
        for (i, line) in lines.enumerate() {
            let ln = i + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |message: String| KrylovError::TraceFormat { line: ln, message };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(bad(format!("expected 5 fields, found {}", fields.len())));
            }
            let k: usize = fields[0]
                .parse()
                .map_err(|_| bad(format!("bad iteration index {:?}", fields[0])))?;
            if k != trace.len() {
                return Err(bad(format!("expected iteration {}, found {k}", trace.len())));
            }
            let num = |s: &str| ctx.parse(s).map_err(|e| bad(e.to_string()));
            trace.push(CgRecord {
                k,
                gamma: num(fields[1])?,
                delta: num(fields[2])?,
                rnorm2: num(fields[3])?,
                true_err2: if fields[4].is_empty() {
                    None
                } else {
                    Some(num(fields[4])?)
                },
                theta1: None,
            });
        }
        Ok(trace)
    }
}
