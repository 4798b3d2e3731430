use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vr3c::hetero::{DEFAULT_ORACLE_CAP, DEFAULT_RESOLUTION};
use vr3c::tradeoff::SweepAxis;

#[derive(Debug, Parser)]
#[command(
    name = "vr3c",
    version,
    about = "Joint caching and offloading policies for mobile VR delivery",
    after_help = "Exit codes: 0 ok, 1 unexpected failure, 2 invalid input, \
                  3 infeasible model, 4 instance too large for the oracle."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form optimum of a symmetric scenario.
    SolveSymmetric(SolveSymmetricArgs),
    /// Greedy, local-search or exhaustive policy for a heterogeneous scenario.
    SolveHetero(SolveHeteroArgs),
    /// Minimum rate over a grid of one or two resource axes, as CSV.
    Sweep(SweepArgs),
    /// Write a heterogeneous scenario with Zipf popularity.
    GenScenario(GenScenarioArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Report,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ga,
    Mca,
    Oracle,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file. Without it reports go to stdout and CSV goes to the
    /// output directory if one is set, else stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Default directory for CSV and generated scenario files.
    #[arg(long, env = "VR3C_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveSymmetricArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Report)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SolveHeteroArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Ga)]
    pub method: MethodArg,
    /// Knapsack grid resolution used by mca.
    #[arg(long = "Q", default_value_t = DEFAULT_RESOLUTION as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub resolution: u64,
    /// Overrides the seed of a zipf stanza.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest N the oracle accepts.
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Report)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub scenario: PathBuf,
    /// cache-fraction, energy-fraction, device-freq or energy. Give twice
    /// for a surface; the first axis is the outer loop.
    #[arg(long, required = true, value_parser = parse_axis)]
    pub axis: Vec<SweepAxis>,
    /// `start:stop:count` or `a,b,c`, one per --axis in the same order.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub grid: Vec<String>,
    /// Continuous offload budget instead of a whole number of viewpoints
    /// (symmetric scenarios).
    #[arg(long)]
    pub relaxed: bool,
    /// Overrides the seed of a zipf stanza.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenScenarioArgs {
    #[arg(long)]
    pub count: usize,
    /// Zipf exponent.
    #[arg(long, default_value_t = 0.8)]
    pub exponent: f64,
    #[arg(long, default_value_t = 15e6)]
    pub input_bits_min: f64,
    #[arg(long, default_value_t = 25e6)]
    pub input_bits_max: f64,
    /// Output bits per input bit.
    #[arg(long, default_value_t = 2.0)]
    pub output_ratio: f64,
    #[arg(long, default_value_t = 10.0)]
    pub cycles_per_bit: f64,
    #[arg(long, default_value_t = 0.02)]
    pub deadline: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e11)]
    pub server_freq: f64,
    #[arg(long, default_value_t = 3e10)]
    pub device_freq: f64,
    #[arg(long, default_value_t = 1e-27)]
    pub energy_coeff: f64,
    /// Energy budget in J.
    #[arg(long, conflicts_with = "energy_fraction")]
    pub energy_budget: Option<f64>,
    /// Energy budget as a fraction of what offloading everything costs.
    #[arg(long, default_value_t = 0.5)]
    pub energy_fraction: f64,
    /// Cache size in bits.
    #[arg(long, conflicts_with = "cache_fraction")]
    pub cache_bits: Option<f64>,
    /// Cache size as a fraction of all input bits.
    #[arg(long, default_value_t = 0.5)]
    pub cache_fraction: f64,
    /// Write the generator stanza instead of the generated viewpoints.
    #[arg(long, conflicts_with = "viewpoints_csv")]
    pub stanza: bool,
    /// Write the viewpoints to this CSV file and reference it by path.
    #[arg(long)]
    pub viewpoints_csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    s.parse().map_err(|e: vr3c::Error| e.to_string())
}
