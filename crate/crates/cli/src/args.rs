use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordinal_tir::{DipMode, EqualRule, Order, PatternKind};

#[derive(Debug, Parser)]
#[command(
    name = "ordinal-tir",
    version,
    about = "Time irreversibility and ordinal pattern statistics for sampled signals"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Embedding dimensions [default: 2,3,4]
    #[arg(long = "m", global = true, value_delimiter = ',', num_args = 1..)]
    pub m: Option<Vec<usize>>,
    /// Embedding delays [default: 1,2,3,4]
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    pub tau: Option<Vec<usize>>,
    #[arg(long, global = true, value_enum, default_value_t = OrderArg::Asc)]
    pub order: OrderArg,
    #[arg(long, global = true, value_enum, default_value_t = EqualRuleArg::GroupSmallest)]
    pub equal_rule: EqualRuleArg,
    #[arg(long, global = true, value_enum, default_value_t = DipModeArg::Occurrences)]
    pub dip_mode: DipModeArg,
    /// Largest absolute lag difference counted as an equal state
    #[arg(long, global = true, default_value_t = 0.0)]
    pub des_threshold: f64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; ORDINAL_TIR_JOBS takes precedence [default: all cores]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output file [default: stdout]
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every statistic per epoch and (m, tau)
    Analyze(AnalyzeArgs),
    /// Rank tests of one metric across groups of an analyze table
    Compare(CompareArgs),
    /// Generate a synthetic signal and its manifest
    Synth(SynthArgs),
    /// Dump the pattern distribution of a whole signal
    Patterns(PatternsArgs),
}

#[derive(Debug, Args)]
pub struct SignalArgs {
    /// Column holding the samples: 0-based index or header name
    #[arg(long, default_value = "0")]
    pub column: String,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Signal CSV files
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Stage label CSV, one per input in the same order
    #[arg(long)]
    pub labels: Vec<PathBuf>,
    #[command(flatten)]
    pub signal: SignalArgs,
    #[arg(long, default_value_t = 60.0)]
    pub epoch_seconds: f64,
    #[arg(long, default_value_t = 250.0)]
    pub sample_rate: f64,
    #[arg(long, default_value_t = 30.0)]
    pub min_length_seconds: f64,
    /// Accepted stage names [default: wake,S1,S2,S3,REM]
    #[arg(long, value_delimiter = ',')]
    pub stages: Option<Vec<String>>,
    /// Keep labels outside the accepted stage set
    #[arg(long)]
    pub allow_unknown: bool,
    /// Drop epochs with any |sample| above this value
    #[arg(long)]
    pub amplitude_ceiling: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Table written by `analyze` (CSV or JSONL)
    pub input: PathBuf,
    /// Metric column, e.g. pTIR or DES
    #[arg(long)]
    pub metric: String,
    #[arg(long, default_value = "stage")]
    pub group_by: String,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum, default_value_t = GeneratorArg::WhiteGaussian)]
    pub kind: GeneratorArg,
    #[arg(long, default_value_t = 15000)]
    pub length: usize,
    #[arg(long, default_value_t = 0.0)]
    pub mean: f64,
    #[arg(long, default_value_t = 1.0)]
    pub std_dev: f64,
    #[arg(long, default_value_t = 0.5)]
    pub phi: f64,
    #[arg(long, default_value_t = 4.0)]
    pub r: f64,
    #[arg(long, default_value_t = 0.3)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub value: f64,
    #[arg(long, default_value_t = 0.0)]
    pub low: f64,
    #[arg(long, default_value_t = 1.0)]
    pub high: f64,
    /// Add Gaussian noise at this signal-to-noise ratio (dB)
    #[arg(long)]
    pub snr_db: Option<f64>,
    /// Quantize to this many uniform levels, after any noise
    #[arg(long)]
    pub quantize: Option<usize>,
    /// Manifest path [default: <output>.manifest.json]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Regenerate from a manifest; generator flags are ignored
    #[arg(long)]
    pub from_manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PatternsArgs {
    /// Signal CSV file
    pub input: PathBuf,
    #[command(flatten)]
    pub signal: SignalArgs,
    #[arg(long, value_enum, default_value_t = KindArg::Amp)]
    pub kind: KindArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Asc,
    Desc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EqualRuleArg {
    Occurrence,
    GroupSmallest,
    GroupLargest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DipModeArg {
    Occurrences,
    Distinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Orp,
    Amp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorArg {
    WhiteGaussian,
    Ar1,
    LogisticMap,
    Constant,
    Alternating,
}

impl From<OrderArg> for Order {
    fn from(v: OrderArg) -> Self {
        match v {
            OrderArg::Asc => Order::Ascending,
            OrderArg::Desc => Order::Descending,
        }
    }
}

impl From<EqualRuleArg> for EqualRule {
    fn from(v: EqualRuleArg) -> Self {
        match v {
            EqualRuleArg::Occurrence => EqualRule::Occurrence,
            EqualRuleArg::GroupSmallest => EqualRule::GroupSmallest,
            EqualRuleArg::GroupLargest => EqualRule::GroupLargest,
        }
    }
}

impl From<DipModeArg> for DipMode {
    fn from(v: DipModeArg) -> Self {
        match v {
            DipModeArg::Occurrences => DipMode::Occurrences,
            DipModeArg::Distinct => DipMode::Distinct,
        }
    }
}

impl From<KindArg> for PatternKind {
    fn from(v: KindArg) -> Self {
        match v {
            KindArg::Orp => PatternKind::OrP,
            KindArg::Amp => PatternKind::AmP,
        }
    }
}
