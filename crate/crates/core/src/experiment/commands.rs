use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analysis::{analyze_series, write_analysis_csv, Oracle, RitzCache};
use crate::bounds::{
    write_acceptance_csv, write_bounds_csv, AdaptiveAcceptor, BoundSeries, MuEstimator,
};
use crate::krylov::matrix_market::{read_matrix_market, validate_spd_candidate, write_matrix_market};
use crate::krylov::{CgTrace, ConjugateGradient, KrylovError, LinearOperator, SparseSymmetric};
use crate::numerics::{PrecisionContext, Real};
use crate::spectrum::io::{write_distribution, write_jacobi};
use crate::spectrum::build_model_problem;

use super::problem::{build_rhs, open};
use super::{load_problem, write_vector, ExperimentConfig, ExperimentError, ProblemSource, RhsSpec};

pub const STATUS_HEADER: &str = "mu_label,mu,status,invalid_since,max_cross_check,accepted";
pub const RITZ_HEADER: &str = "k,theta1,theta1_minus_lambda1";
pub const MARKERS_HEADER: &str = "mu_label,onset,ell1,ell2";
pub const MARKERS_FILE: &str = "markers.csv";
pub const ALPHA_FILE: &str = "alpha.csv";

fn create(path: &Path) -> Result<BufWriter<File>, ExperimentError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| ExperimentError::File {
            path: path.to_path_buf(),
            source: e,
        })
}

/// Writes one file through `body` and remembers its path.
fn emit<F>(dir: &Path, name: &str, written: &mut Vec<PathBuf>, body: F) -> Result<(), ExperimentError>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let path = dir.join(name);
    let mut w = create(&path)?;
    body(&mut w).and_then(|_| w.flush()).map_err(|e| ExperimentError::File {
        path: path.clone(),
        source: e,
    })?;
    written.push(path);
    Ok(())
}

fn out_dir(cfg: &ExperimentConfig) -> Result<&Path, ExperimentError> {
    fs::create_dir_all(&cfg.out).map_err(|e| ExperimentError::File {
        path: cfg.out.clone(),
        source: e,
    })?;
    Ok(&cfg.out)
}

fn jacobi_digits(ctx: &PrecisionContext) -> Option<u32> {
    ctx.digits()
}

/// `(label, mu)` for every configured spec.
pub fn resolve_mus(
    cfg: &ExperimentConfig,
    lambda1: Option<&Real>,
    ctx: &PrecisionContext,
) -> Result<Vec<(String, Real)>, ExperimentError> {
    cfg.mus
        .iter()
        .map(|s| Ok((s.label(), s.resolve(lambda1, ctx)?)))
        .collect()
}

/// Writes the reference Jacobi matrix (also as Matrix Market), the
/// distribution, the binary64 problem matrix and `model.meta`.
pub fn cmd_model(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, ExperimentError> {
    let ProblemSource::Model(params) = &cfg.source else {
        return Err(ExperimentError::Unsupported("`model` needs problem = model".into()));
    };
    let ctx = cfg.context()?;
    let p = build_model_problem(params, &ctx).map_err(|e| ExperimentError::Config {
        line: None,
        message: format!(
            "model construction failed (m = {}, p = {}, lambda = {}..{}, rho = {}, delta = {}): {e}",
            params.m, params.p, params.lambda_first, params.lambda_last, params.rho, params.delta
        ),
    })?;
    let dir = out_dir(cfg)?;
    let digits = ctx.output_digits();
    let mut written = Vec::new();
    emit(dir, "reference.jacobi", &mut written, |w| {
        write_jacobi(w, &p.reference_t, jacobi_digits(&ctx))
    })?;
    emit(dir, "reference.mtx", &mut written, |w| {
        write_matrix_market(w, &SparseSymmetric::from_jacobi(&p.reference_t), digits)
    })?;
    emit(dir, "distribution.txt", &mut written, |w| {
        write_distribution(w, &p.distribution, digits)
    })?;
    emit(dir, "problem.jacobi", &mut written, |w| write_jacobi(w, &p.a, None))?;
    emit(dir, "model.meta", &mut written, |w| {
        writeln!(w, "m = {}", params.m)?;
        writeln!(w, "p = {}", params.p)?;
        writeln!(w, "lambda_first = {}", params.lambda_first)?;
        writeln!(w, "lambda_last = {}", params.lambda_last)?;
        writeln!(w, "rho = {}", params.rho)?;
        writeln!(w, "delta = {}", params.delta)?;
        writeln!(w, "n = {}", p.order())?;
        writeln!(w, "digits = {}", cfg.digits)?;
        writeln!(w, "rhs = e1")?;
        writeln!(w, "lambda_min = {}", p.lambda_min.to_decimal(digits))
    })?;
    Ok(written)
}

/// What a `solve` run did.
#[derive(Clone, Debug)]
pub struct SolveSummary {
    pub iterations: usize,
    pub stop_reason: String,
    pub files: Vec<PathBuf>,
    pub series: Vec<BoundSeries>,
    pub accepted: Vec<usize>,
}

/// Runs CG with one estimator and one acceptance loop per `mu`.
pub fn cmd_solve(cfg: &ExperimentConfig) -> Result<SolveSummary, ExperimentError> {
    cfg.validate()?;
    let ctx = cfg.context()?;
    let problem = load_problem(cfg, &ctx)?;
    let mus = resolve_mus(cfg, problem.lambda1.as_ref(), &ctx)?;
    let tau = ctx.parse(&cfg.tau)?;
    let stop = cfg.stop.as_deref().map(|s| ctx.parse(s)).transpose()?;
    let max_iters = cfg.max_iters.unwrap_or(problem.op.dim());

    let mut cg = ConjugateGradient::new(&problem.op, &problem.b, &ctx)?;
    if let Some(x) = &problem.exact {
        cg = cg.with_exact_solution(x.clone());
    }
    let mut estimators: Vec<MuEstimator> = mus
        .iter()
        .map(|(l, m)| MuEstimator::new(l.clone(), m.clone()))
        .collect();
    let mut acceptors = mus
        .iter()
        .map(|_| AdaptiveAcceptor::new(tau.clone()))
        .collect::<Result<Vec<_>, _>>()?;

    let mut stop_reason = "max_iters".to_string();
    for k in 0..max_iters {
        let rec = match cg.step() {
            Ok(r) => r.clone(),
            Err(KrylovError::ZeroResidual { .. }) => {
                stop_reason = "zero_residual".into();
                break;
            }
            Err(KrylovError::NotSpd { k, value }) => {
                stop_reason = format!("not_spd at {k} ({value})");
                break;
            }
            Err(e) => return Err(e.into()),
        };
        for (est, acc) in estimators.iter_mut().zip(acceptors.iter_mut()) {
            est.observe(&rec);
            acc.observe(cg.trace(), est.series(), k)?;
        }
        let done = match (&stop, acceptors.first().and_then(|a| a.accepted().last())) {
            (Some(s), Some(a)) => &a.omega <= s,
            _ => false,
        };
        if done {
            stop_reason = "stop_threshold".into();
            break;
        }
    }

    let trace = cg.into_trace();
    let series: Vec<BoundSeries> = estimators.into_iter().map(MuEstimator::into_series).collect();
    let digits = ctx.output_digits();
    let dir = out_dir(cfg)?;
    let mut files = Vec::new();
    emit(dir, "trace.csv", &mut files, |w| trace.write_csv(w, digits))?;
    emit(dir, "bounds.csv", &mut files, |w| write_bounds_csv(w, &series, digits))?;
    for (s, acc) in series.iter().zip(&acceptors) {
        emit(dir, &format!("acceptance_{}.csv", s.label), &mut files, |w| {
            write_acceptance_csv(w, acc.accepted(), digits)
        })?;
    }
    emit(dir, "status.csv", &mut files, |w| {
        writeln!(w, "{STATUS_HEADER}")?;
        for (s, acc) in series.iter().zip(&acceptors) {
            let inv = s.invalid_since();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                s.label,
                s.mu.to_decimal(digits),
                if inv.is_some() { "invalid" } else { "ok" },
                inv.map(|k| k.to_string()).unwrap_or_default(),
                s.max_cross_check().map(|c| c.to_decimal(6)).unwrap_or_default(),
                acc.accepted().len()
            )?;
        }
        Ok(())
    })?;
    if let Some(l1) = &problem.lambda1 {
        let cache = RitzCache::from_trace(&trace, ctx)?;
        let mut rows = Vec::with_capacity(trace.len());
        for k in 0..trace.len() {
            let th = if k == 0 { None } else { Some(cache.theta1(k)?.clone()) };
            rows.push(th);
        }
        emit(dir, "ritz.csv", &mut files, |w| {
            writeln!(w, "{RITZ_HEADER}")?;
            for (k, th) in rows.iter().enumerate() {
                match th {
                    Some(t) => writeln!(w, "{k},{},{}", t.to_decimal(digits), (t - l1).to_decimal(digits))?,
                    None => writeln!(w, "{k},,")?,
                }
            }
            Ok(())
        })?;
    }
    emit(dir, "solve.meta", &mut files, |w| {
        writeln!(w, "digits = {}", cfg.digits)?;
        writeln!(w, "iterations = {}", trace.len())?;
        writeln!(w, "stop_reason = {stop_reason}")?;
        writeln!(w, "tau = {}", cfg.tau)?;
        writeln!(w, "oracle = {}", cfg.oracle)?;
        if let Some(l1) = &problem.lambda1 {
            writeln!(w, "lambda_min = {}", l1.to_decimal(digits))?;
        }
        Ok(())
    })?;
    Ok(SolveSummary {
        iterations: trace.len(),
        stop_reason,
        files,
        accepted: acceptors.iter().map(|a| a.accepted().len()).collect(),
        series,
    })
}

/// Spectral diagnostics over the trace written by `solve`.
pub fn cmd_analyze(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, ExperimentError> {
    cfg.validate()?;
    let ctx = cfg.context()?;
    let trace_path = cfg.out.join("trace.csv");
    if !trace_path.exists() {
        return Err(ExperimentError::Unsupported(format!(
            "{} not found; run `solve` first",
            trace_path.display()
        )));
    }
    let trace = CgTrace::read_csv(open(&trace_path)?, &ctx)?;
    if trace.is_empty() {
        return Err(ExperimentError::Unsupported("empty trace".into()));
    }
    let lambda1 = if cfg.oracle {
        load_problem(cfg, &ctx)?.lambda1
    } else {
        None
    };
    let mus = resolve_mus(cfg, lambda1.as_ref(), &ctx)?;
    let oracle = lambda1.as_ref().map(|l| Oracle {
        lambda1: l.clone(),
        eigenvalues: None,
    });
    let cache = RitzCache::from_trace(&trace, ctx)?;
    let series: Vec<BoundSeries> = mus
        .iter()
        .map(|(l, m)| MuEstimator::from_records(l.clone(), m.clone(), trace.records()))
        .collect();
    let digits = ctx.output_digits();
    let dir = out_dir(cfg)?;
    let mut files = Vec::new();
    let mut reports = Vec::new();
    for s in &series {
        let rep = analyze_series(&trace, s, &cache, oracle.as_ref())?;
        emit(dir, &format!("analysis_{}.csv", s.label), &mut files, |w| {
            write_analysis_csv(w, &rep, digits)
        })?;
        reports.push(rep);
    }
    let at_lambda1 = lambda1
        .as_ref()
        .map(|l| MuEstimator::from_records("lambda1", l.clone(), trace.records()));
    let alphas: Vec<Real> = (1..=trace.len())
        .map(|k| cache.alpha(k).cloned())
        .collect::<Result<_, _>>()?;
    emit(dir, ALPHA_FILE, &mut files, |w| {
        write!(w, "k,alpha")?;
        for s in &series {
            write!(w, ",alpha_{}", s.label)?;
        }
        if at_lambda1.is_some() {
            write!(w, ",alpha_lambda1")?;
        }
        writeln!(w)?;
        let cell = |x: &Option<Real>| x.as_ref().map(|v| v.to_decimal(digits)).unwrap_or_default();
        for (k, a) in alphas.iter().enumerate() {
            write!(w, "{k},{}", a.to_decimal(digits))?;
            for s in &series {
                write!(w, ",{}", cell(&s.records[k].alpha_mu_next))?;
            }
            if let Some(l) = &at_lambda1 {
                write!(w, ",{}", cell(&l.records[k].alpha_mu_next))?;
            }
            writeln!(w)?;
        }
        Ok(())
    })?;
    emit(dir, MARKERS_FILE, &mut files, |w| {
        writeln!(w, "{MARKERS_HEADER}")?;
        let opt = |x: Option<usize>| x.map_or("none".to_string(), |v| v.to_string());
        for r in &reports {
            let onset = r.onset.map(|o| o.to_string()).unwrap_or_default();
            writeln!(w, "{},{onset},{},{}", r.label, opt(r.markers.ell1), opt(r.markers.ell2))?;
        }
        Ok(())
    })?;
    Ok(files)
}

/// Reads and validates a Matrix Market file and stores it with its
/// right-hand side under the output directory.
pub fn cmd_ingest(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, ExperimentError> {
    let ProblemSource::Matrix(path) = &cfg.source else {
        return Err(ExperimentError::Unsupported(
            "`ingest` needs problem = matrix and matrix = <path>".into(),
        ));
    };
    let ctx = cfg.context()?;
    let a = read_matrix_market(open(path)?, &ctx)?;
    validate_spd_candidate(&a, &ctx)?;
    let rhs = cfg.rhs.clone().unwrap_or(RhsSpec::NormalizedOnes);
    let b = build_rhs(&rhs, a.dim(), &ctx)?;
    let digits = ctx.output_digits();
    let dir = out_dir(cfg)?;
    let mut files = Vec::new();
    emit(dir, "problem.mtx", &mut files, |w| write_matrix_market(w, &a, digits))?;
    emit(dir, "rhs.txt", &mut files, |w| write_vector(w, &b, digits))?;
    emit(dir, "ingest.meta", &mut files, |w| {
        writeln!(w, "source = {}", path.display())?;
        writeln!(w, "n = {}", a.dim())?;
        writeln!(w, "nnz_lower = {}", a.nnz_lower())?;
        writeln!(
            w,
            "rhs = {}",
            match &rhs {
                RhsSpec::NormalizedOnes => "ones".to_string(),
                RhsSpec::E1 => "e1".to_string(),
                RhsSpec::File(p) => p.display().to_string(),
            }
        )?;
        writeln!(w, "digits = {}", cfg.digits)
    })?;
    Ok(files)
}
