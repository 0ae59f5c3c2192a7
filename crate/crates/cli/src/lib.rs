//! Command-line front end: batch metrics over labelled epochs, group
//! comparisons, synthetic signals and pattern dumps.

pub mod analyze;
pub mod args;
pub mod compare;
pub mod error;
pub mod output;
pub mod patterns;
pub mod synth;

use std::str::FromStr;

use ordinal_tir::ingest::{ColumnSelector, EpochSpec, LabelOptions, DEFAULT_STAGES};
use ordinal_tir::synth::{GeneratorKind, GeneratorSpec};
use ordinal_tir::{DipMode, EmbeddingConfig, EqualRule, Order};

use crate::analyze::{AnalyzeInput, EpochOptions};
use crate::args::{Cli, Command, CommonArgs, FormatArg, GeneratorArg, SynthArgs};
pub use crate::error::{CliError, CliResult};
use crate::output::{open_output, write_table, Format};

/// Environment variable that overrides `--jobs`.
pub const JOBS_ENV: &str = "ORDINAL_TIR_JOBS";

pub const DEFAULT_M: [usize; 3] = [2, 3, 4];
pub const DEFAULT_TAU: [usize; 4] = [1, 2, 3, 4];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub m_list: Vec<usize>,
    pub tau_list: Vec<usize>,
    pub order: Order,
    pub equal_rule: EqualRule,
    pub dip_mode: DipMode,
    pub des_threshold: f64,
    pub format: Format,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m_list: DEFAULT_M.to_vec(),
            tau_list: DEFAULT_TAU.to_vec(),
            order: Order::Ascending,
            equal_rule: EqualRule::GroupSmallest,
            dip_mode: DipMode::Occurrences,
            des_threshold: 0.0,
            format: Format::Csv,
            seed: 0,
            jobs: 1,
        }
    }
}

impl RunConfig {
    /// `env_jobs`, when present, wins over `--jobs`.
    pub fn from_args(common: &CommonArgs, env_jobs: Option<&str>) -> CliResult<Self> {
        let jobs = match env_jobs {
            Some(raw) => raw.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!("{JOBS_ENV}={raw:?} is not a positive integer"))
            })?,
            None => common.jobs.unwrap_or_else(|| {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            }),
        };
        if jobs == 0 {
            return Err(CliError::Usage("job count must be at least 1".into()));
        }
        if !(common.des_threshold.is_finite() && common.des_threshold >= 0.0) {
            return Err(CliError::Usage(format!(
                "--des-threshold must be finite and >= 0, got {}",
                common.des_threshold
            )));
        }
        let config = Self {
            m_list: common.m.clone().unwrap_or_else(|| DEFAULT_M.to_vec()),
            tau_list: common.tau.clone().unwrap_or_else(|| DEFAULT_TAU.to_vec()),
            order: common.order.into(),
            equal_rule: common.equal_rule.into(),
            dip_mode: common.dip_mode.into(),
            des_threshold: common.des_threshold,
            format: match common.format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Jsonl => Format::Jsonl,
            },
            seed: common.seed,
            jobs,
        };
        config.grid()?;
        Ok(config)
    }

    /// Embedding configurations in (m, tau) order, duplicates removed.
    pub fn grid(&self) -> CliResult<Vec<EmbeddingConfig>> {
        if self.m_list.is_empty() || self.tau_list.is_empty() {
            return Err(CliError::Usage("--m and --tau need at least one value".into()));
        }
        let mut ms = self.m_list.clone();
        let mut taus = self.tau_list.clone();
        ms.sort_unstable();
        ms.dedup();
        taus.sort_unstable();
        taus.dedup();
        let mut grid = Vec::with_capacity(ms.len() * taus.len());
        for &m in &ms {
            for &tau in &taus {
                let c = EmbeddingConfig::new(m, tau)
                    .map_err(CliError::usage)?
                    .with_order(self.order)
                    .with_equal_rule(self.equal_rule);
                grid.push(c);
            }
        }
        Ok(grid)
    }
}

fn thread_pool(jobs: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))
}

fn column(raw: &str) -> CliResult<ColumnSelector> {
    ColumnSelector::from_str(raw).map_err(CliError::usage)
}

fn generator_spec(a: &SynthArgs, seed: u64) -> GeneratorSpec {
    let kind = match a.kind {
        GeneratorArg::WhiteGaussian => GeneratorKind::WhiteGaussian { mean: a.mean, std_dev: a.std_dev },
        GeneratorArg::Ar1 => GeneratorKind::Ar1 { phi: a.phi },
        GeneratorArg::LogisticMap => GeneratorKind::LogisticMap { r: a.r, x0: a.x0 },
        GeneratorArg::Constant => GeneratorKind::Constant { value: a.value },
        GeneratorArg::Alternating => GeneratorKind::Alternating { low: a.low, high: a.high },
    };
    GeneratorSpec::new(kind, a.length, seed)
}

/// Runs a parsed command line. `env_jobs` is the value of [`JOBS_ENV`].
pub fn run(cli: &Cli, env_jobs: Option<&str>) -> CliResult<()> {
    let config = RunConfig::from_args(&cli.common, env_jobs)?;
    let output = cli.common.output.as_deref();
    match &cli.command {
        Command::Analyze(a) => {
            if !a.labels.is_empty() && a.labels.len() != a.inputs.len() {
                return Err(CliError::Usage(format!(
                    "{} label files for {} inputs; give one per input or none",
                    a.labels.len(),
                    a.inputs.len()
                )));
            }
            let inputs: Vec<AnalyzeInput> = a
                .inputs
                .iter()
                .enumerate()
                .map(|(i, p)| AnalyzeInput { signal: p.clone(), labels: a.labels.get(i).cloned() })
                .collect();
            let options = EpochOptions {
                column: column(&a.signal.column)?,
                spec: EpochSpec {
                    epoch_seconds: a.epoch_seconds,
                    sample_rate_hz: a.sample_rate,
                    min_length_seconds: a.min_length_seconds,
                    amplitude_ceiling: a.amplitude_ceiling,
                },
                labels: LabelOptions {
                    stages: a
                        .stages
                        .clone()
                        .unwrap_or_else(|| DEFAULT_STAGES.iter().map(|s| s.to_string()).collect()),
                    allow_unknown: a.allow_unknown,
                },
            };
            let rows = thread_pool(config.jobs)?.install(|| {
                let epochs = analyze::load_epochs(&inputs, &options)?;
                analyze::analyze_epochs(&epochs, &config)
            })?;
            write_table(&rows, config.format, &mut *open_output(output)?)
        }
        Command::Compare(a) => {
            let observations = compare::read_table(&a.input, &a.metric, &a.group_by)?;
            let grid = match (&cli.common.m, &cli.common.tau) {
                (None, None) => None,
                _ => Some((config.m_list.as_slice(), config.tau_list.as_slice())),
            };
            let rows = compare::compare(&observations, &a.metric, grid)?;
            write_table(&rows, config.format, &mut *open_output(output)?)
        }
        Command::Synth(a) => {
            let Some(out) = output else {
                return Err(CliError::Usage("synth needs --output".into()));
            };
            let manifest = match &a.from_manifest {
                Some(p) => synth::read_manifest(p)?,
                None => synth::Manifest::new(generator_spec(a, config.seed), a.snr_db, a.quantize),
            };
            let (series, manifest) = synth::synthesize(&manifest)?;
            synth::write_signal(out, &series)?;
            let manifest_path = a.manifest.clone().unwrap_or_else(|| synth::default_manifest_path(out));
            synth::write_manifest(&manifest_path, &manifest)
        }
        Command::Patterns(a) => {
            let series = ordinal_tir::ingest::read_signal_csv(&a.input, &column(&a.signal.column)?)?;
            let grid: Vec<_> = config.grid()?.into_iter().map(|c| c.with_kind(a.kind.into())).collect();
            let rows = patterns::pattern_rows(&series, &grid)?;
            write_table(&rows, config.format, &mut *open_output(output)?)
        }
    }
}
