use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "loglie",
    version,
    about = "Log-Euclidean geometry of SPD and correlation matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Log-Euclidean structure to compute in.
    #[arg(long, value_enum, global = true, default_value_t = ChartKind::SpdLe)]
    pub chart: ChartKind,
    /// Matrix file (JSON list or single-matrix CSV); repeat to concatenate.
    #[arg(long = "input", short = 'i', global = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Seed for randomised suites.
    #[arg(long, env = "LOGLIE_SEED", global = true, default_value_t = 0)]
    pub seed: u64,
    /// Replace every check tolerance.
    #[arg(long, global = true)]
    pub tol_all: Option<f64>,
    /// Step-norm threshold of the unit-diagonal fixed point.
    #[arg(long, global = true)]
    pub tol_fixed_point: Option<f64>,
    /// Gradient-norm threshold of the row-sum Newton solver.
    #[arg(long, global = true)]
    pub tol_newton: Option<f64>,
    /// Tolerance of isometry checks.
    #[arg(long, global = true)]
    pub tol_iso: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Log-Euclidean mean and variance of the inputs.
    Mean,
    /// Points on the geodesic through two matrices.
    Geodesic {
        /// Comma-separated parameters; values outside [0, 1] extrapolate.
        #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        t: Vec<f64>,
    },
    /// Geodesic distance between two matrices.
    Dist,
    /// Apply an isometry between structures.
    Map {
        #[arg(long, value_enum)]
        from: ChartKind,
        #[arg(long, value_enum)]
        to: ChartKind,
    },
    /// Run the seeded property suite.
    Verify {
        /// Trials per check and matrix size.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Inclusive size range `lo..hi`, or a single size.
        #[arg(long, default_value = "2..6", value_parser = parse_range)]
        n: (usize, usize),
        /// Restrict to these criteria (comma-separated numbers).
        #[arg(long = "criterion", value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartKind {
    SpdLe,
    CorrOfflog,
    CorrLogscaling,
}

impl ChartKind {
    pub fn name(self) -> &'static str {
        match self {
            ChartKind::SpdLe => "spd-le",
            ChartKind::CorrOfflog => "corr-offlog",
            ChartKind::CorrLogscaling => "corr-logscaling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected `lo..hi` or `n`, got `{s}`");
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let lo = lo.trim().parse().map_err(|_| bad())?;
            let hi = hi.trim().parse().map_err(|_| bad())?;
            Ok((lo, hi))
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}
