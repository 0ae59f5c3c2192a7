use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use ordinal_tir::ingest::{
    read_signal_csv, read_stage_labels, segment_epochs, ColumnSelector, EpochSpec, LabelOptions,
    LabeledEpoch,
};
use ordinal_tir::{compute_metrics, EmbeddingConfig, MetricOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::sig12;
use crate::RunConfig;

/// One row of the analyze table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub epoch_id: String,
    pub stage: String,
    pub m: usize,
    pub tau: usize,
    pub n_windows: u64,
    #[serde(rename = "pTIR")]
    pub p_tir: f64,
    #[serde(rename = "pTAS")]
    pub p_tas: f64,
    #[serde(rename = "noeTIR")]
    pub noe_tir: f64,
    #[serde(rename = "noeTAS")]
    pub noe_tas: f64,
    #[serde(rename = "PEn")]
    pub pen: f64,
    #[serde(rename = "DES")]
    pub des: f64,
    #[serde(rename = "DIP")]
    pub dip: f64,
}

#[derive(Debug, Clone)]
pub struct AnalyzeInput {
    pub signal: PathBuf,
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct EpochOptions {
    pub column: ColumnSelector,
    pub spec: EpochSpec,
    pub labels: LabelOptions,
}

fn source_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Reads and segments every input, one file per task. Epochs come back
/// ordered by (source, start sample).
pub fn load_epochs(inputs: &[AnalyzeInput], options: &EpochOptions) -> CliResult<Vec<LabeledEpoch>> {
    options.spec.validate().map_err(CliError::usage)?;
    let mut seen = BTreeSet::new();
    for input in inputs {
        let name = source_name(&input.signal);
        if !seen.insert(name.clone()) {
            return Err(CliError::Usage(format!("two inputs share the source name {name:?}")));
        }
    }
    let per_file: Vec<Vec<LabeledEpoch>> = inputs
        .par_iter()
        .map(|input| -> CliResult<Vec<LabeledEpoch>> {
            let series = read_signal_csv(&input.signal, &options.column)?
                .with_sample_rate(options.spec.sample_rate_hz)?;
            let labels = match &input.labels {
                Some(p) => read_stage_labels(p, &options.labels)?,
                None => Vec::new(),
            };
            Ok(segment_epochs(&series, &labels, &options.spec, &source_name(&input.signal))?)
        })
        .collect::<CliResult<_>>()?;
    let mut epochs: Vec<LabeledEpoch> = per_file.into_iter().flatten().collect();
    epochs.sort_by(|a, b| (&a.source, a.start_sample).cmp(&(&b.source, b.start_sample)));
    Ok(epochs)
}

/// Every (m, tau) of the grid must leave at least one window in the shortest epoch.
pub fn check_feasible(grid: &[EmbeddingConfig], epochs: &[LabeledEpoch]) -> CliResult<()> {
    let Some(shortest) = epochs.iter().map(|e| e.series.len()).min() else {
        return Err(CliError::Data("no epoch qualifies for analysis".into()));
    };
    for c in grid {
        if c.window_count(shortest).unwrap_or(0) == 0 {
            return Err(CliError::Usage(format!(
                "m={} tau={} spans {} samples but the shortest epoch has {shortest}",
                c.m(),
                c.tau(),
                c.span()
            )));
        }
    }
    Ok(())
}

/// Computes the metric battery for every epoch and grid point. Epochs are
/// processed in parallel on the current rayon pool; the result order depends
/// only on the inputs.
pub fn analyze_epochs(epochs: &[LabeledEpoch], config: &RunConfig) -> CliResult<Vec<MetricsRow>> {
    let grid = config.grid()?;
    check_feasible(&grid, epochs)?;
    let options = MetricOptions {
        dip_mode: config.dip_mode,
        des_threshold: config.des_threshold,
    };
    let per_epoch: Vec<Vec<MetricsRow>> = epochs
        .par_iter()
        .map(|epoch| {
            grid.iter()
                .map(|c| {
                    let r = compute_metrics(&epoch.series, c, &options)?;
                    Ok(MetricsRow {
                        epoch_id: epoch.epoch_id(),
                        stage: epoch.stage.clone(),
                        m: c.m(),
                        tau: c.tau(),
                        n_windows: r.n_windows,
                        p_tir: sig12(r.p_tir),
                        p_tas: sig12(r.p_tas),
                        noe_tir: sig12(r.noe_tir),
                        noe_tas: sig12(r.noe_tas),
                        pen: sig12(r.pen),
                        des: sig12(r.des),
                        dip: sig12(r.dip),
                    })
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<_>>()?;

    // `epochs` is sorted by (source, start), so the key below only orders the grid.
    let mut rows: Vec<(usize, MetricsRow)> = per_epoch
        .into_iter()
        .enumerate()
        .flat_map(|(i, rows)| rows.into_iter().map(move |r| (i, r)))
        .collect();
    rows.sort_by_key(|(i, r)| (*i, r.m, r.tau));
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}
