use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadstat_core::association::{Measure, NullSurrogate, Statistic};
use quadstat_core::models::{self, SyntheticModel};
use quadstat_core::Method;

use crate::report::Format;

/// Null distributions, p-values, power and sample sizes for quadratic-form
/// haplotype association statistics.
#[derive(Debug, Parser)]
#[command(name = "quadstat", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Add wall time to the report (which is then no longer reproducible byte for byte).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P-value of D_s for observed haplotype counts.
    Pvalue(PvalueArgs),
    /// Power at given group sizes.
    Power(PowerArgs),
    /// Smallest group size reaching a target power.
    Samplesize(SampleSizeArgs),
    /// Draw statistics (or one count table) from a frequency model.
    Simulate(SimulateArgs),
    /// Kolmogorov and Cramér-von Mises distances of the surrogates from simulated nulls.
    Validate(ValidateArgs),
    /// Tail probability or critical value of a weighted chi-square form.
    Dist(DistArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    TwoCum,
    FourCum,
    DiffChisq,
    Mc,
    Permutation,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::TwoCum => Method::TwoCum,
            MethodArg::FourCum => Method::FourCum,
            MethodArg::DiffChisq => Method::DiffChisq,
            MethodArg::Mc => Method::MonteCarlo,
            MethodArg::Permutation => Method::Permutation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Matching,
    Length,
    Counting,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Matching => Measure::Matching,
            MeasureArg::Length => Measure::Length,
            MeasureArg::Counting => Measure::Counting,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    K4,
    K5Rare,
    K8,
}

impl From<ModelArg> for SyntheticModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::K4 => models::FOUR,
            ModelArg::K5Rare => models::FIVE_RARE,
            ModelArg::K8 => models::EIGHT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NullArg {
    FourCum,
    TwoCum,
}

impl From<NullArg> for NullSurrogate {
    fn from(m: NullArg) -> Self {
        match m {
            NullArg::FourCum => NullSurrogate::FourCum,
            NullArg::TwoCum => NullSurrogate::TwoCum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatisticArg {
    Ds,
    Dt,
}

impl From<StatisticArg> for Statistic {
    fn from(s: StatisticArg) -> Self {
        match s {
            StatisticArg::Ds => Statistic::Ds,
            StatisticArg::Dt => Statistic::Dt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Hypothesis {
    Null,
    Alternative,
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    /// Similarity matrix CSV; the header names the haplotype of each column.
    #[arg(long, conflicts_with = "measure")]
    pub matrix: Option<PathBuf>,
    /// Built-in similarity measure (default counting).
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    /// Per-locus weights for the length measure, comma-separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "matrix")]
    pub locus_weights: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SimulationArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Threads for simulation; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ModelSource {
    /// Bundled synthetic model.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Frequency CSV with header `haplotype,freq1,freq2`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PvalueArgs {
    /// Count CSV with header `haplotype,count1,count2`.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub similarity: SimilarityArgs,
    #[arg(long, value_enum, default_value = "four-cum")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 10_000)]
    pub n_perm: usize,
    #[arg(long, default_value_t = 100_000)]
    pub n_draws: usize,
    #[command(flatten)]
    pub sim: SimulationArgs,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub source: ModelSource,
    #[command(flatten)]
    pub similarity: SimilarityArgs,
    /// Group 1 size.
    #[arg(long)]
    pub n: u64,
    /// Group 2 size (default round(ratio * n)).
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub ratio: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Surrogate for the null critical value.
    #[arg(long = "null", value_enum, default_value = "four-cum")]
    pub null_surrogate: NullArg,
}

#[derive(Debug, Args)]
pub struct SampleSizeArgs {
    #[command(flatten)]
    pub source: ModelSource,
    #[command(flatten)]
    pub similarity: SimilarityArgs,
    /// m / n.
    #[arg(long, default_value_t = 1.0)]
    pub ratio: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Target power.
    #[arg(long, default_value_t = 0.8)]
    pub power: f64,
    #[arg(long = "null", value_enum, default_value = "four-cum")]
    pub null_surrogate: NullArg,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: ModelSource,
    #[command(flatten)]
    pub similarity: SimilarityArgs,
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub ratio: f64,
    #[arg(long, value_enum, default_value = "null")]
    pub hypothesis: Hypothesis,
    #[arg(long, value_enum, default_value = "ds")]
    pub statistic: StatisticArg,
    #[arg(long, default_value_t = 10_000)]
    pub n_draws: usize,
    /// Emit one simulated count table instead of statistics.
    #[arg(long)]
    pub counts: bool,
    #[command(flatten)]
    pub sim: SimulationArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Bundled model (default: all of them).
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Similarity measure (default: all three).
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, value_enum, default_value = "ds")]
    pub statistic: StatisticArg,
    #[arg(long, default_value_t = 100_000)]
    pub n_draws: usize,
    /// Also write QQ pairs (empirical vs surrogate quantiles) to this CSV.
    #[arg(long)]
    pub qq: Option<PathBuf>,
    #[command(flatten)]
    pub sim: SimulationArgs,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Weights of Σ ω_i (Y_i + b_i)^2, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub weights: Vec<f64>,
    /// Offsets b_i (default zero).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub offsets: Option<Vec<f64>>,
    /// Report P(D >= x).
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Report the critical value with upper tail alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value = "four-cum")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 100_000)]
    pub n_draws: usize,
    #[command(flatten)]
    pub sim: SimulationArgs,
}
