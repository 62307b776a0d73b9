use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use radau_cg::experiment::{
    cmd_analyze, cmd_ingest, cmd_model, cmd_solve, run_selftest, ExperimentConfig, ExperimentError,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    /// Build the model problem and write its files.
    Model,
    /// Run CG with the configured bounds and the acceptance loop.
    Solve,
    /// Spectral diagnostics over a finished solve.
    Analyze,
    /// Validate a Matrix Market file and store it as a problem.
    Ingest,
    /// Run the built-in invariant checks.
    Selftest,
}

/// CG with Gauss, Gauss-Radau and simple error bounds at configurable precision.
#[derive(Debug, Parser)]
#[command(name = "radau-cg", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Decimal digits; 0 selects binary64.
    #[arg(long)]
    digits: Option<u32>,
    /// `abs:<x>`, `rel:<d>` or `ulp`; repeat for several values.
    #[arg(long = "mu")]
    mus: Vec<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Use lambda_1 and the exact solution.
    #[arg(long)]
    oracle: bool,
}

fn config(cli: &Cli) -> Result<ExperimentConfig, ExperimentError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            return Err(ExperimentError::Config {
                line: None,
                message: "--config <file> is required".into(),
            })
        }
    };
    if let Some(d) = cli.digits {
        cfg.digits = d;
    }
    if !cli.mus.is_empty() {
        cfg.mus = cli.mus.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    }
    if let Some(t) = &cli.tau {
        cfg.tau = t.clone();
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if cli.max_iters.is_some() {
        cfg.max_iters = cli.max_iters;
    }
    cfg.oracle |= cli.oracle;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), ExperimentError> {
    let list = |files: Vec<PathBuf>| files.iter().for_each(|f| println!("{}", f.display()));
    match cli.command {
        Command::Model => list(cmd_model(&config(cli)?)?),
        Command::Solve => {
            let s = cmd_solve(&config(cli)?)?;
            eprintln!("{} iterations ({})", s.iterations, s.stop_reason);
            list(s.files);
        }
        Command::Analyze => list(cmd_analyze(&config(cli)?)?),
        Command::Ingest => list(cmd_ingest(&config(cli)?)?),
        Command::Selftest => {
            let digits = match (&cli.config, cli.digits) {
                (_, Some(d)) => d,
                (Some(_), None) => config(cli)?.digits,
                (None, None) => 64,
            };
            let checks = run_selftest(digits)?;
            checks.iter().for_each(|c| println!("{c}"));
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(ExperimentError::Selftest(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("radau-cg: {e}");
            ExitCode::FAILURE
        }
    }
}
