use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Bilateral Gamma distributions: evaluation, shape analysis, sampling,
/// fitting and verification.
///
/// Parameters are always given in the order alpha+,lambda+,alpha-,lambda-
/// (shape and rate of the positive part, then of the negative part).
#[derive(Debug, Parser)]
#[command(name = "bgamma", version)]
pub struct Cli {
    /// Parameters as alpha+,lambda+,alpha-,lambda- (repeatable for plot-data).
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "A+,L+,A-,L-")]
    pub params: Vec<String>,

    /// JSON configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write results to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Evaluation point (repeatable). Without it, values are read from stdin.
    #[arg(long = "x", allow_hyphen_values = true)]
    pub x: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    /// Probability level (repeatable). Without it, values are read from stdin.
    #[arg(long = "u")]
    pub u: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density at the given points.
    Pdf(PointArgs),
    /// Distribution function at the given points.
    Cdf(PointArgs),
    /// Quantiles at the given probability levels.
    Quantile(ProbArgs),
    /// Mean, variance, skewness and kurtosis.
    Moments,
    /// Mode and the interval it is known to lie in.
    Mode,
    /// Full shape report: smoothness, mode, taxonomy, near-zero and tail behaviour.
    Classify,
    /// Independent draws, one per line.
    Sample {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Maximum-likelihood fit to one numeric column.
    Fit {
        /// CSV input; standard input if absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of optimizer starts.
        #[arg(long)]
        starts: Option<usize>,
    },
    /// Density curves on a grid (defaults to one example per shape class).
    PlotData {
        #[arg(long, allow_hyphen_values = true)]
        grid_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        grid_max: Option<f64>,
        #[arg(long)]
        grid_count: Option<usize>,
    },
    /// Run the oracle suite; exits with status 5 if any comparison fails.
    Verify {
        /// Multiplies every oracle threshold.
        #[arg(long)]
        tolerance_scale: Option<f64>,
    },
}
