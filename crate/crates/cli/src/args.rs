//! Command-line definitions.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

/// Marginal laws, exact maxima laws and extremes of the Bernoulli AR(1)
/// process with Cantor-type stationary law.
#[derive(Debug, Parser)]
#[command(name = "cantor-evt", version)]
pub struct Cli {
    /// Flat key=value file; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stationary distribution function with certified error bounds.
    Cdf(CdfArgs),
    /// Log-periodic factor over one period.
    Nu(NuArgs),
    /// Generalized inverse of the distribution function.
    Quantile(QuantileArgs),
    /// One trajectory of the process.
    Simulate(SimulateArgs),
    /// Monte Carlo law of the normalized maximum against the limit laws.
    MaxLaw(MaxLawArgs),
    /// Runs and ratio estimates of the extremal index.
    ExtremalIndex(ExtremalArgs),
    /// Exact finite-horizon maximum laws by three routes.
    ExactLaw(ExactLawArgs),
    /// Invariant suites with measured defects and thresholds.
    Verify(VerifyArgs),
    /// Figure data as CSV plus a static SVG rendering.
    Figures(FiguresArgs),
}

/// Rational from `a/b`, an integer or a decimal literal.
pub fn rational(s: &str) -> Result<BigRational, String> {
    cantor_evt::exact::parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct Model {
    /// Contraction factor in (0, 1/2]; `a/b` is read exactly.
    #[arg(long, value_parser = rational)]
    pub beta: BigRational,

    /// Probability of the zero innovation, in (0, 1).
    #[arg(long, value_parser = rational)]
    pub p: BigRational,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("points").required(true).args(["x", "grid"])))]
pub struct CdfArgs {
    #[command(flatten)]
    pub model: Model,

    /// Evaluation points, comma separated.
    #[arg(long, value_parser = rational, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<BigRational>,

    /// N + 1 equally spaced points on [0, 1].
    #[arg(long)]
    pub grid: Option<u32>,

    /// Digit levels of the descent.
    #[arg(long, default_value_t = 64)]
    pub depth: u32,
}

#[derive(Debug, Args)]
pub struct NuArgs {
    #[command(flatten)]
    pub model: Model,

    /// N + 1 equally spaced points on [log beta, 0].
    #[arg(long, default_value_t = 200)]
    pub grid: u32,

    #[arg(long, default_value_t = 64)]
    pub depth: u32,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("levels").required(true).args(["alpha", "grid"])))]
pub struct QuantileArgs {
    #[command(flatten)]
    pub model: Model,

    /// Probability levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,

    /// N + 1 equally spaced levels on [0, 1].
    #[arg(long)]
    pub grid: Option<u32>,

    #[arg(long, default_value_t = 64)]
    pub depth: u32,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: Model,

    /// Number of recursion steps after the stationary start.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,

    /// Digits of the stationary start.
    #[arg(long, default_value_t = 64)]
    pub depth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Dep,
    Iid,
}

impl From<ModeArg> for cantor_evt::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Dep => cantor_evt::Mode::Dependent,
            ModeArg::Iid => cantor_evt::Mode::Iid,
        }
    }
}

#[derive(Debug, Args)]
pub struct MaxLawArgs {
    #[command(flatten)]
    pub model: Model,

    /// Negative normalized levels, comma separated.
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub x_grid: Vec<f64>,

    /// Level index; the maximum runs over k_n = floor(q^-n) observations.
    #[arg(long)]
    pub n: u32,

    /// Monte Carlo replications.
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,

    #[arg(long, value_enum, default_value_t = ModeArg::Dep)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Runs,
    Ratio,
    Both,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[command(flatten)]
    pub model: Model,

    /// Normalized level defining u_n.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub x: f64,

    #[arg(long)]
    pub n: u32,

    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,

    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,

    #[arg(long, value_enum, default_value_t = ModeArg::Dep)]
    pub mode: ModeArg,

    /// Observations per replication for the runs estimator.
    #[arg(long)]
    pub horizon: Option<u64>,

    /// Bootstrap resamples for the intervals.
    #[arg(long, default_value_t = 200)]
    pub bootstrap: u32,
}

#[derive(Debug, Args)]
pub struct ExactLawArgs {
    #[command(flatten)]
    pub model: Model,

    /// Normalized level, negative; `a/b` is read exactly.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub x: BigRational,

    #[arg(long)]
    pub n: u32,

    /// Horizons s, comma separated; all of 2..=j_n+1 when absent.
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<u32>,

    /// Digits of X_0 enumerated for the bracket; 0 skips the enumeration.
    #[arg(long, default_value_t = 20)]
    pub k: u32,

    #[arg(long, default_value_t = 64)]
    pub depth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Marginal,
    Exactlaw,
    Dynamics,
    Association,
    All,
}

impl From<SuiteArg> for cantor_evt::verify::Suite {
    fn from(s: SuiteArg) -> Self {
        use cantor_evt::verify::Suite;
        match s {
            SuiteArg::Marginal => Suite::Marginal,
            SuiteArg::Exactlaw => Suite::ExactLaw,
            SuiteArg::Dynamics => Suite::Dynamics,
            SuiteArg::Association => Suite::Association,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Convergence,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long, value_enum)]
    pub fig: FigureId,

    /// Directory receiving the CSV and SVG files.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,

    /// Grid intervals for the distribution function and nu panels.
    #[arg(long, default_value_t = 1000)]
    pub grid: u32,

    /// Replications for the empirical table of the convergence figure.
    #[arg(long, default_value_t = 20_000)]
    pub reps: u64,
}
