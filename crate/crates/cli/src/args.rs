use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clarkson_core::InequalityId;

use crate::grid::parse_real;
use crate::SEED_ENV;

#[derive(Debug, Parser)]
#[command(name = "clarkson", version, about = "Check Clarkson inequalities and their variants numerically")]
pub struct Cli {
    /// Worker threads for parallel commands (defaults to all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Relative tolerance above which a gap counts as HOLDS.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    /// Relative band below which a negative gap counts as VIOLATED.
    #[arg(long, global = true)]
    pub borderline_band: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an inequality on given vector pairs.
    Verify(VerifyArgs),
    /// Random sampling over a (p, q) grid.
    Scan(ScanArgs),
    /// Counterexample or extremal search at one (p, q).
    Search(SearchArgs),
    /// Tabulate the monotone function phi on [0, 1].
    Phi(PhiArgs),
    /// Tabulate chi on [0, c] and report its sign changes.
    Chi(ChiArgs),
}

fn parse_id(s: &str) -> Result<InequalityId, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_id)]
    pub ineq: InequalityId,

    /// JSON file of the form {"pairs":[{"x":[..],"y":[..],"w":[..]}]}.
    #[arg(long, conflicts_with_all = ["x", "y", "w"])]
    pub input: Option<PathBuf>,

    /// Inline first vector, comma separated.
    #[arg(long, allow_hyphen_values = true, requires = "y")]
    pub x: Option<String>,

    #[arg(long, allow_hyphen_values = true, requires = "x")]
    pub y: Option<String>,

    /// Inline weights, comma separated.
    #[arg(long, requires = "x")]
    pub w: Option<String>,

    /// Comma-separated p values.
    #[arg(long)]
    pub p: Option<String>,

    /// Comma-separated q values; defaults to q = p.
    #[arg(long)]
    pub q: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstraintArg {
    Nonnegative,
    Signed,
    Dominated,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// uniform, exponential or sparse:DENSITY.
    #[arg(long, default_value = "uniform")]
    pub dist: String,

    /// Defaults to the constraint matching the inequality.
    #[arg(long, value_enum)]
    pub constraint: Option<ConstraintArg>,

    #[arg(long)]
    pub n_min: Option<usize>,

    #[arg(long)]
    pub n_max: Option<usize>,

    /// Draw random positive weights.
    #[arg(long)]
    pub weights: bool,

    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = parse_id)]
    pub ineq: InequalityId,

    /// start:stop:step
    #[arg(long)]
    pub p_grid: Option<String>,

    /// start:stop:step
    #[arg(long)]
    pub q_grid: Option<String>,

    /// Samples per grid cell.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,

    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Counterexample,
    Extremal,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_id)]
    pub ineq: InequalityId,

    #[arg(long, value_parser = parse_real)]
    pub p: Option<f64>,

    /// Defaults to q = p.
    #[arg(long, value_parser = parse_real)]
    pub q: Option<f64>,

    #[arg(long, value_enum, default_value = "counterexample")]
    pub mode: Mode,

    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,

    /// Allow exponents or inputs outside the inequality's stated domain.
    #[arg(long)]
    pub explore: bool,

    /// Read every gap the wrong way round (for testing the search itself).
    #[arg(long)]
    pub invert_orientation: bool,

    /// Write the best configuration as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct PhiArgs {
    /// Inline u, comma separated.
    #[arg(long, requires = "v", conflicts_with = "input")]
    pub u: Option<String>,

    #[arg(long, requires = "u")]
    pub v: Option<String>,

    /// Inline weights, comma separated.
    #[arg(long, conflicts_with = "input")]
    pub w: Option<String>,

    /// JSON input file; its first pair is read as (u, v).
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, value_parser = parse_real)]
    pub p: f64,

    #[arg(long, value_parser = parse_real)]
    pub q: f64,

    #[arg(long, default_value_t = 257)]
    pub grid_size: usize,
}

#[derive(Debug, Args)]
pub struct ChiArgs {
    #[arg(long, value_parser = parse_real)]
    pub p: f64,

    #[arg(long, value_parser = parse_real)]
    pub q: f64,

    #[arg(long, value_parser = parse_real, default_value = "1")]
    pub c: f64,

    #[arg(long, default_value_t = 1001)]
    pub grid_size: usize,
}
