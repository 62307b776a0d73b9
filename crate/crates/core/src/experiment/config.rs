use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::numerics::{PrecisionContext, Real};
use crate::spectrum::ModelParams;

use super::ExperimentError;

/// Prescribed node `mu` as written on the command line or in a config file.
#[derive(Clone, Debug, PartialEq)]
pub enum MuSpec {
    /// `abs:<decimal>`
    Absolute(String),
    /// `rel:<d>`, meaning `(1 - 10^-d) lambda_1`.
    Relative(u32),
    /// `ulp`: largest binary64 value not above `lambda_1`.
    NativeFloor,
}

impl MuSpec {
    /// Short name used in CSV columns and file names.
    pub fn label(&self) -> String {
        match self {
            MuSpec::Absolute(s) => format!("abs{s}"),
            MuSpec::Relative(d) => format!("mu{d}"),
            MuSpec::NativeFloor => "ulp".into(),
        }
    }

    pub fn needs_lambda1(&self) -> bool {
        !matches!(self, MuSpec::Absolute(_))
    }

    pub fn resolve(&self, lambda1: Option<&Real>, ctx: &PrecisionContext) -> Result<Real, ExperimentError> {
        let need = || {
            lambda1.ok_or_else(|| ExperimentError::Config {
                line: None,
                message: format!("mu spec `{self}` needs lambda_1 (oracle mode)"),
            })
        };
        let mu = match self {
            MuSpec::Absolute(s) => ctx.parse(s)?,
            MuSpec::Relative(d) => (ctx.one() - ctx.pow10(-(*d as i64))) * need()?,
            MuSpec::NativeFloor => need()?.native_floor(),
        };
        if !mu.is_positive() {
            return Err(ExperimentError::Config {
                line: None,
                message: format!("mu spec `{self}` gives a nonpositive value"),
            });
        }
        Ok(mu)
    }
}

impl FromStr for MuSpec {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ExperimentError::Config {
            line: None,
            message: format!("bad mu spec {s:?} (expected abs:<x>, rel:<d> or ulp)"),
        };
        if s == "ulp" {
            return Ok(MuSpec::NativeFloor);
        }
        match s.split_once(':') {
            Some(("abs", x)) if x.trim().parse::<f64>().is_ok() => Ok(MuSpec::Absolute(x.trim().to_string())),
            Some(("rel", d)) => d.trim().parse().map(MuSpec::Relative).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for MuSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MuSpec::Absolute(x) => write!(f, "abs:{x}"),
            MuSpec::Relative(d) => write!(f, "rel:{d}"),
            MuSpec::NativeFloor => f.write_str("ulp"),
        }
    }
}

/// Right-hand side for external matrices.
#[derive(Clone, Debug, PartialEq)]
pub enum RhsSpec {
    /// `1/sqrt(n)` in every entry.
    NormalizedOnes,
    E1,
    /// One value per line.
    File(PathBuf),
}

/// Where the linear system comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSource {
    Model(ModelParams),
    /// Jacobi matrix file; `b = e_1` unless `rhs` says otherwise.
    Jacobi(PathBuf),
    /// Matrix Market file.
    Matrix(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub source: ProblemSource,
    /// `None` for the default right-hand side of the source.
    pub rhs: Option<RhsSpec>,
    /// `0` selects binary64.
    pub digits: u32,
    pub mus: Vec<MuSpec>,
    pub tau: String,
    /// Defaults to the problem dimension.
    pub max_iters: Option<usize>,
    /// Stop once an accepted bound on the squared A-norm error of the first
    /// `mu` is at most this value.
    pub stop: Option<String>,
    pub out: PathBuf,
    pub oracle: bool,
    /// `lambda_1` for sources where it is not computed.
    pub lambda_min: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            source: ProblemSource::Model(ModelParams::reference()),
            rhs: None,
            digits: 128,
            mus: Vec::new(),
            tau: "0.25".into(),
            max_iters: None,
            stop: None,
            out: PathBuf::from("out"),
            oracle: false,
            lambda_min: None,
        }
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment. Relative paths are
    /// taken relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ExperimentError> {
        let mut cfg = Self::default();
        let mut params = ModelParams::reference();
        let mut kind = "model".to_string();
        let (mut jacobi, mut matrix) = (None, None);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| ExperimentError::Config {
                line: Some(i + 1),
                message,
            };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            let int = |v: &str| v.parse::<usize>().map_err(|_| err(format!("{key}: bad integer {v:?}")));
            let dec = |v: &str| {
                v.parse::<f64>()
                    .map(|_| v.to_string())
                    .map_err(|_| err(format!("{key}: bad number {v:?}")))
            };
            match key {
                "problem" => kind = value.to_string(),
                "m" => params.m = int(value)?,
                "p" => params.p = int(value)?,
                "lambda_first" => params.lambda_first = dec(value)?,
                "lambda_last" => params.lambda_last = dec(value)?,
                "rho" => params.rho = dec(value)?,
                "delta" => params.delta = dec(value)?,
                "jacobi" => jacobi = Some(base.join(value)),
                "matrix" => matrix = Some(base.join(value)),
                "rhs" => {
                    cfg.rhs = Some(match value {
                        "ones" => RhsSpec::NormalizedOnes,
                        "e1" => RhsSpec::E1,
                        path => RhsSpec::File(base.join(path)),
                    })
                }
                "digits" => cfg.digits = int(value)? as u32,
                "mu" => {
                    cfg.mus = value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.parse().map_err(|e: ExperimentError| err(e.to_string())))
                        .collect::<Result<_, _>>()?
                }
                "tau" => cfg.tau = dec(value)?,
                "max_iters" => cfg.max_iters = Some(int(value)?),
                "stop" => cfg.stop = Some(dec(value)?),
                "out" => cfg.out = base.join(value),
                "oracle" => {
                    cfg.oracle = parse_bool(value).ok_or_else(|| err(format!("oracle: bad flag {value:?}")))?
                }
                "lambda_min" => cfg.lambda_min = Some(dec(value)?),
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        let missing = |what: &str| ExperimentError::Config {
            line: None,
            message: format!("problem = {kind} needs `{what} = <path>`"),
        };
        cfg.source = match kind.as_str() {
            "model" => ProblemSource::Model(params),
            "jacobi" => ProblemSource::Jacobi(jacobi.ok_or_else(|| missing("jacobi"))?),
            "matrix" => ProblemSource::Matrix(matrix.ok_or_else(|| missing("matrix"))?),
            other => {
                return Err(ExperimentError::Config {
                    line: None,
                    message: format!("unknown problem kind {other:?}"),
                })
            }
        };
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::File {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn context(&self) -> Result<PrecisionContext, ExperimentError> {
        Ok(PrecisionContext::with_digits(self.digits)?)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |message: String| Err(ExperimentError::Config { line: None, message });
        if self.mus.is_empty() {
            return bad("at least one mu is required".into());
        }
        if let Some(s) = self.mus.iter().find(|s| s.needs_lambda1() && !self.oracle) {
            return bad(format!("mu spec `{s}` is relative to lambda_1 and needs oracle mode"));
        }
        let mut labels: Vec<String> = self.mus.iter().map(MuSpec::label).collect();
        labels.sort();
        labels.dedup();
        if labels.len() != self.mus.len() {
            return bad("duplicate mu specs".into());
        }
        if self.tau.parse::<f64>().map_or(true, |t| t <= 0.0) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        self.context()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_spec_grammar() {
        assert_eq!("rel:8".parse::<MuSpec>().unwrap(), MuSpec::Relative(8));
        assert_eq!("ulp".parse::<MuSpec>().unwrap(), MuSpec::NativeFloor);
        assert_eq!("abs:1e-7".parse::<MuSpec>().unwrap(), MuSpec::Absolute("1e-7".into()));
        for bad in ["rel:x", "abs:", "mu3", "abs:one"] {
            assert!(bad.parse::<MuSpec>().is_err(), "{bad}");
        }
        assert_eq!(MuSpec::Relative(3).to_string(), "rel:3");
    }

    #[test]
    fn resolve_relative_and_floor() {
        let ctx = PrecisionContext::with_digits(40).unwrap();
        let l1 = ctx.parse("1.00000000000000000001").unwrap();
        let mu = MuSpec::Relative(3).resolve(Some(&l1), &ctx).unwrap();
        assert!((&mu / &l1).rel_diff(&ctx.parse("0.999").unwrap()) < ctx.tolerance());
        let f = MuSpec::NativeFloor.resolve(Some(&l1), &ctx).unwrap();
        assert!(f <= l1 && f.to_f64() == 1.0);
        assert!(MuSpec::Relative(3).resolve(None, &ctx).is_err());
    }

    #[test]
    fn config_file() {
        let text = "# reference setup\nproblem = model\ndigits = 64\nmu = rel:3, ulp\n\
                    oracle = yes\ntau = 0.5\nout = res\nm = 6 # small\n";
        let cfg = ExperimentConfig::parse(text, Path::new("/tmp/x")).unwrap();
        assert_eq!(cfg.digits, 64);
        assert_eq!(cfg.mus, vec![MuSpec::Relative(3), MuSpec::NativeFloor]);
        assert_eq!(cfg.out, PathBuf::from("/tmp/x/res"));
        assert!(matches!(&cfg.source, ProblemSource::Model(p) if p.m == 6 && p.p == 4));
        cfg.validate().unwrap();

        let e = ExperimentConfig::parse("digits = 64\nbogus = 1\n", Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(ExperimentConfig::parse("problem = matrix\n", Path::new(".")).is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.validate().is_err());
        cfg.mus = vec![MuSpec::Relative(3)];
        assert!(cfg.validate().is_err());
        cfg.oracle = true;
        cfg.validate().unwrap();
        cfg.mus.push(MuSpec::Relative(3));
        assert!(cfg.validate().is_err());
    }
}
