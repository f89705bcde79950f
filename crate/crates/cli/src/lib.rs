//! Command line front end: `swipt fit | sweep | validate | figure`.
//!
//! Exit codes are 0 on success, 2 on any input or usage error and 3 when
//! `validate` finds a disagreement.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use swipt_core::harvest::ModelKind;

pub mod commands;
pub mod config;
pub mod models;
pub mod output;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] swipt_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }
    }
}

/// What a successful run concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    ValidationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Done => 0,
            Outcome::ValidationFailed => EXIT_VALIDATION,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "swipt",
    version,
    about = "Nonlinear harvesting and outage analysis for backscatter tags"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one harvesting model to a rectifier dataset.
    Fit(FitArgs),
    /// Outage report over a grid of one scenario variable.
    Sweep(SweepArgs),
    /// Compare the closed forms against Monte Carlo.
    Validate(ValidateArgs),
    /// Emit plot-ready CSV for a figure.
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with header `input_dbm,harvested_mw`.
    pub dataset: PathBuf,
    #[arg(long, value_parser = parse_kind)]
    pub model: ModelKind,
    /// Degree of the ground-truth efficiency polynomial.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Sensitivity; defaults to the last leading zero-output point.
    #[arg(long, allow_hyphen_values = true)]
    pub p_sen_dbm: Option<f64>,
    /// Saturation; defaults to the last point.
    #[arg(long, allow_hyphen_values = true)]
    pub p_sat_dbm: Option<f64>,
    /// Where to write the fitted `[harvest_model]` table.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    #[value(name = "p_c_mw")]
    PcMw,
    #[value(name = "p_sen_dbm")]
    PsenDbm,
    #[value(name = "d_m")]
    DM,
    #[value(name = "beta")]
    Beta,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::PcMw => "p_c_mw",
            SweepVar::PsenDbm => "p_sen_dbm",
            SweepVar::DM => "d_m",
            SweepVar::Beta => "beta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// The one variable to sweep.
    #[arg(long, value_enum)]
    pub var: SweepVar,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub scale: Scale,
    /// `all`, or a comma-separated list of fitted models; default is the configured model.
    #[arg(long)]
    pub model: Option<String>,
    /// Monte Carlo trials per row; 0 skips the Monte Carlo columns.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[arg(long, env = "SWIPT_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, env = "SWIPT_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; the report does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    HarvestCurves,
    SensitivityOutage,
    SuccessVsPc,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub which: Figure,
    #[arg(long)]
    pub config: PathBuf,
    /// Grid size; each figure has its own default.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<ModelKind, String> {
    s.parse()
}

/// Runs a parsed command. Primary output goes to `--out` or `stdout`,
/// diagnostics to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Fit(a) => commands::fit::run(&a, stdout, stderr),
        Command::Sweep(a) => commands::sweep::run(&a, stdout, stderr),
        Command::Validate(a) => commands::validate::run(&a, stdout, stderr),
        Command::Figure(a) => commands::figure::run(&a, stdout, stderr),
    }
}

/// Parses `args` (including the program name) and runs, returning the exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(cli, stdout, stderr) {
        Ok(o) => o.exit_code(),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub(crate) fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Input(format!("thread pool: {e}"))),
        None => Ok(f()),
    }
}

/// Writes `bytes` to `path`, or to `stdout` when no path is given.
pub(crate) fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => Ok(stdout.write_all(bytes)?),
    }
}

pub(crate) fn warn_all(loaded: &config::Loaded, stderr: &mut dyn Write) {
    for w in loaded.scenario.warnings() {
        let _ = writeln!(stderr, "warning: {w}");
    }
}
