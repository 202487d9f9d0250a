//! `qnr`: numerical ranges of matrices and of truncated operator models.
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 matrix is not
//! quadratic (`analyze`), 3 more coefficients than the dimension (`cnum`).

mod commands;
mod config;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;

#[derive(Parser, Debug)]
#[command(name = "qnr", version, about = "Numerical ranges of quadratic operators")]
struct Cli {
    /// TOML file with default values for any long flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Leave the timestamp out of reports so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Numerical range of a matrix against the prediction for quadratic matrices.
    Analyze(AnalyzeArgs),
    /// Write a matrix from an operator family and print its predicted values.
    Gen(GenArgs),
    /// Norms and numerical-range widths of growing truncations.
    Sweep(SweepArgs),
    /// c-numerical range of a matrix.
    Cnum(CnumArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Matrix file (JSON).
    pub input: PathBuf,
    /// Number of support angles.
    #[arg(long)]
    pub angles: Option<usize>,
    /// Random unit vectors for the sampling cross-check.
    #[arg(long)]
    pub oracle: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report path; printed to standard output when absent.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Boundary CSV path.
    #[arg(long)]
    pub boundary: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum GenFamily {
    Composition,
    Hankel,
    CauchyCircle,
    Canonical,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub family: GenFamily,
    /// Composition symbol parameter, e.g. `0.5` or `0.3+0.4i`.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Power-weight exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub size: Option<usize>,
    /// Two eigenvalues for `canonical`, e.g. `1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Positive diagonal of X for `canonical`.
    #[arg(long)]
    pub x: Option<String>,
    /// Multiplicities of the two eigenvalue blocks for `canonical`.
    #[arg(long)]
    pub dims: Option<String>,
    /// Seed of the random unitary conjugation for `canonical`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum SweepFamily {
    Composition,
    Hankel,
    CauchyCircle,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub family: SweepFamily,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Truncation sizes, e.g. `32,64,128,256`.
    #[arg(long)]
    pub sizes: Option<String>,
    /// CSV path; printed to standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CnumArgs {
    pub input: PathBuf,
    /// Real coefficients, e.g. `1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long)]
    pub angles: Option<usize>,
    /// Random orthonormal frames for the sampling cross-check.
    #[arg(long)]
    pub oracle: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Essential norm of `A - mu I` for the inner disc of the sandwich check.
    #[arg(long)]
    pub s0: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub boundary: Option<PathBuf>,
}

fn init_threads() {
    let Ok(text) = std::env::var("QNR_THREADS") else {
        return;
    };
    match text.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("warning: could not size the thread pool: {e}");
            }
        }
        _ => eprintln!("warning: ignoring QNR_THREADS={text:?}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();

    let config = match cli.config.as_deref().map(Config::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let timestamp = !(cli.no_timestamp || config.no_timestamp.unwrap_or(false));

    let outcome = match cli.command {
        Command::Analyze(args) => commands::analyze(args, &config, timestamp),
        Command::Gen(args) => commands::gen(args, &config, timestamp),
        Command::Sweep(args) => commands::sweep(args, &config),
        Command::Cnum(args) => commands::cnum(args, &config, timestamp),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
