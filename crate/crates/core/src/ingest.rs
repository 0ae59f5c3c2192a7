//! Signal and stage-label files, and cutting labeled epochs.
//!
//! Signals are CSV (optionally with a header row) or one number per line.
//! Stage labels are CSV rows `start_sample,stage`, sorted and strictly
//! increasing; each label holds until the next one or the end of the record.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::patterns::SampleSeries;

/// Stages accepted when no explicit set is configured.
pub const DEFAULT_STAGES: [&str; 5] = ["wake", "S1", "S2", "S3", "REM"];

/// Stage name given to epochs of a record without any labels.
pub const UNLABELED: &str = "unlabeled";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    /// Zero-based column index.
    Index(usize),
    /// Header name; the file must then have a header row.
    Name(String),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        ColumnSelector::Index(0)
    }
}

impl std::str::FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    /// All-digit strings select by index, anything else by name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

pub fn read_signal_csv(path: impl AsRef<Path>, column: &ColumnSelector) -> Result<SampleSeries> {
    let path = path.as_ref();
    parse_signal_csv(open(path)?, column, path)
}

/// Parses a signal from any reader; `path` only labels error messages.
pub fn parse_signal_csv<R: Read>(
    reader: R,
    column: &ColumnSelector,
    path: &Path,
) -> Result<SampleSeries> {
    let mut rdr = csv_reader(reader);
    let mut index = match column {
        ColumnSelector::Index(i) => Some(*i),
        ColumnSelector::Name(_) => None,
    };
    let mut samples = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, e.to_string())
        })?;
        let line = record_line(&record);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if first {
            first = false;
            match column {
                ColumnSelector::Name(name) => {
                    let i = record.iter().position(|h| h == name).ok_or_else(|| {
                        parse_error(path, line, format!("no column named {name:?} in header"))
                    })?;
                    index = Some(i);
                    continue;
                }
                ColumnSelector::Index(i) => {
                    // A non-numeric first row is a header.
                    if record.get(*i).is_some_and(|f| f.parse::<f64>().is_err()) {
                        continue;
                    }
                }
            }
        }
        let i = index.expect("column resolved on the first row");
        let field = record
            .get(i)
            .ok_or_else(|| parse_error(path, line, format!("missing column {i}")))?;
        let value: f64 = field
            .parse()
            .map_err(|_| parse_error(path, line, format!("not a number: {field:?}")))?;
        if !value.is_finite() {
            return Err(parse_error(path, line, format!("non-finite value {field:?}")));
        }
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(parse_error(path, 0, "no samples"));
    }
    SampleSeries::new(samples)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageLabel {
    pub start_sample: usize,
    pub stage: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelOptions {
    pub stages: Vec<String>,
    pub allow_unknown: bool,
}

impl Default for LabelOptions {
    fn default() -> Self {
        Self {
            stages: DEFAULT_STAGES.iter().map(|s| s.to_string()).collect(),
            allow_unknown: false,
        }
    }
}

pub fn read_stage_labels(path: impl AsRef<Path>, options: &LabelOptions) -> Result<Vec<StageLabel>> {
    let path = path.as_ref();
    parse_stage_labels(open(path)?, options, path)
}

pub fn parse_stage_labels<R: Read>(
    reader: R,
    options: &LabelOptions,
    path: &Path,
) -> Result<Vec<StageLabel>> {
    let mut rdr = csv_reader(reader);
    let mut labels: Vec<StageLabel> = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, e.to_string())
        })?;
        let line = record_line(&record);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let is_first = std::mem::replace(&mut first, false);
        if record.len() < 2 {
            return Err(parse_error(path, line, "expected `start_sample,stage`"));
        }
        let start = match record[0].parse::<usize>() {
            Ok(s) => s,
            Err(_) if is_first => continue,
            Err(_) => {
                return Err(parse_error(
                    path,
                    line,
                    format!("invalid start_sample {:?}", &record[0]),
                ))
            }
        };
        let stage = record[1].to_string();
        if !options.allow_unknown && !options.stages.contains(&stage) {
            return Err(Error::Labels(format!(
                "{}:{line}: unknown stage {stage:?}",
                path.display()
            )));
        }
        if let Some(prev) = labels.last() {
            if start <= prev.start_sample {
                return Err(Error::Labels(format!(
                    "{}:{line}: start_sample {start} does not follow {}",
                    path.display(),
                    prev.start_sample
                )));
            }
        }
        labels.push(StageLabel {
            start_sample: start,
            stage,
        });
    }
    Ok(labels)
}

/// Epoch geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochSpec {
    pub epoch_seconds: f64,
    pub sample_rate_hz: f64,
    pub min_length_seconds: f64,
    /// Epochs with any `|sample|` above this are dropped.
    pub amplitude_ceiling: Option<f64>,
}

impl Default for EpochSpec {
    fn default() -> Self {
        Self {
            epoch_seconds: 60.0,
            sample_rate_hz: 250.0,
            min_length_seconds: 30.0,
            amplitude_ceiling: None,
        }
    }
}

impl EpochSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.epoch_seconds)
            || !positive(self.sample_rate_hz)
            || !positive(self.min_length_seconds)
        {
            return Err(Error::InvalidArgument(
                "epoch length, sample rate and minimum length must be positive".into(),
            ));
        }
        if self.epoch_samples() < 2 {
            return Err(Error::InvalidArgument(format!(
                "an epoch of {} s at {} Hz holds fewer than 2 samples",
                self.epoch_seconds, self.sample_rate_hz
            )));
        }
        if self.epoch_seconds < self.min_length_seconds {
            return Err(Error::InvalidArgument(format!(
                "epoch length {} s is below the minimum of {} s",
                self.epoch_seconds, self.min_length_seconds
            )));
        }
        if let Some(c) = self.amplitude_ceiling {
            if !positive(c) {
                return Err(Error::InvalidArgument(format!("amplitude ceiling {c}")));
            }
        }
        Ok(())
    }

    pub fn epoch_samples(&self) -> usize {
        (self.epoch_seconds * self.sample_rate_hz).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledEpoch {
    pub series: SampleSeries,
    pub stage: String,
    pub source: String,
    pub start_sample: usize,
}

impl LabeledEpoch {
    pub fn epoch_id(&self) -> String {
        format!("{}@{}", self.source, self.start_sample)
    }
}

/// Cuts consecutive, non-overlapping epochs from sample 0. An epoch keeps a
/// stage only if it lies wholly inside one label interval; others, samples
/// before the first label, and the trailing remainder are dropped. With no
/// labels every epoch is tagged [`UNLABELED`].
pub fn segment_epochs(
    series: &SampleSeries,
    labels: &[StageLabel],
    spec: &EpochSpec,
    source: &str,
) -> Result<Vec<LabeledEpoch>> {
    spec.validate()?;
    if let Some(fs) = series.sample_rate_hz() {
        if fs != spec.sample_rate_hz {
            return Err(Error::Segmentation(format!(
                "series sampled at {fs} Hz, epoch spec expects {} Hz",
                spec.sample_rate_hz
            )));
        }
    }
    let len = series.len();
    if let Some(l) = labels.iter().find(|l| l.start_sample >= len) {
        return Err(Error::Segmentation(format!(
            "label {:?} starts at sample {} beyond the {len}-sample signal",
            l.stage, l.start_sample
        )));
    }
    if labels.windows(2).any(|w| w[1].start_sample <= w[0].start_sample) {
        return Err(Error::Segmentation("labels are not strictly increasing".into()));
    }

    let n = spec.epoch_samples();
    let x = series.samples();
    let mut epochs = Vec::new();
    for k in 0..len / n {
        let start = k * n;
        let end = start + n;
        let stage = if labels.is_empty() {
            UNLABELED
        } else {
            // Last label starting at or before `start`.
            let i = labels.partition_point(|l| l.start_sample <= start);
            if i == 0 {
                continue;
            }
            let interval_end = labels.get(i).map_or(len, |l| l.start_sample);
            if end > interval_end {
                continue;
            }
            labels[i - 1].stage.as_str()
        };
        let window = &x[start..end];
        if let Some(c) = spec.amplitude_ceiling {
            if window.iter().any(|v| v.abs() > c) {
                continue;
            }
        }
        let epoch_series = SampleSeries::new(window.to_vec())?
            .with_sample_rate(spec.sample_rate_hz)?
            .with_label(format!("{source}@{start}"));
        epochs.push(LabeledEpoch {
            series: epoch_series,
            stage: stage.to_string(),
            source: source.to_string(),
            start_sample: start,
        });
    }
    Ok(epochs)
}
