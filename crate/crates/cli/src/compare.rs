use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use ordinal_tir::ingest::DEFAULT_STAGES;
use ordinal_tir::stats::{kruskal_wallis, mann_whitney_u, GroupSample};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::sig12;

/// One observation pulled from an analyze table.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub m: usize,
    pub tau: usize,
    pub group: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Group,
    KruskalWallis,
    MannWhitney,
}

/// Report row. Group rows carry `group_a`, `n_a`, `mean` and `se`; test rows
/// carry the statistic and p-value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub m: usize,
    pub tau: usize,
    pub metric: String,
    pub kind: RowKind,
    pub group_a: Option<String>,
    pub group_b: Option<String>,
    pub n_a: Option<usize>,
    pub n_b: Option<usize>,
    pub mean: Option<f64>,
    pub se: Option<f64>,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub exact: Option<bool>,
}

impl CompareRow {
    fn new(m: usize, tau: usize, metric: &str, kind: RowKind) -> Self {
        Self {
            m,
            tau,
            metric: metric.to_string(),
            kind,
            group_a: None,
            group_b: None,
            n_a: None,
            n_b: None,
            mean: None,
            se: None,
            statistic: None,
            p_value: None,
            exact: None,
        }
    }
}

fn missing_column(name: &str, path: &Path) -> CliError {
    CliError::Usage(format!("column {name:?} not found in {}", path.display()))
}

fn parse_value<T: std::str::FromStr>(raw: &str, what: &str, line: usize, path: &Path) -> CliResult<T> {
    raw.trim().parse().map_err(|_| {
        CliError::Data(format!("{}:{line}: {what} value {raw:?} is not numeric", path.display()))
    })
}

/// Reads an analyze table in either output format, detected from the first
/// non-blank character.
pub fn read_table(path: &Path, metric: &str, group_by: &str) -> CliResult<Vec<Observation>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        read_jsonl(&text, path, metric, group_by)
    } else {
        read_csv(&text, path, metric, group_by)
    }
}

fn read_csv(text: &str, path: &Path, metric: &str, group_by: &str) -> CliResult<Vec<Observation>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| missing_column(name, path))
    };
    let (im, it, ig, iv) = (col("m")?, col("tau")?, col(group_by)?, col(metric)?);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        out.push(Observation {
            m: parse_value(&record[im], "m", line, path)?,
            tau: parse_value(&record[it], "tau", line, path)?,
            group: record[ig].to_string(),
            value: parse_value(&record[iv], metric, line, path)?,
        });
    }
    Ok(out)
}

fn read_jsonl(text: &str, path: &Path, metric: &str, group_by: &str) -> CliResult<Vec<Observation>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = i + 1;
        let v: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| CliError::Data(format!("{}:{line_no}: {e}", path.display())))?;
        let field = |name: &str| v.get(name).ok_or_else(|| missing_column(name, path));
        let number = |name: &str| -> CliResult<f64> {
            field(name)?.as_f64().ok_or_else(|| {
                CliError::Data(format!("{}:{line_no}: {name} is not numeric", path.display()))
            })
        };
        let integer = |name: &str| -> CliResult<usize> {
            field(name)?.as_u64().map(|u| u as usize).ok_or_else(|| {
                CliError::Data(format!("{}:{line_no}: {name} is not an integer", path.display()))
            })
        };
        let group = match field(group_by)? {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push(Observation {
            m: integer("m")?,
            tau: integer("tau")?,
            group,
            value: number(metric)?,
        });
    }
    Ok(out)
}

/// Values per group, keyed by display order.
type Groups = BTreeMap<(usize, String), Vec<f64>>;

/// Sleep stages first in their canonical order, then anything else sorted.
fn group_order(name: &str) -> (usize, &str) {
    let rank = DEFAULT_STAGES.iter().position(|s| *s == name).unwrap_or(DEFAULT_STAGES.len());
    (rank, name)
}

fn mean_and_se(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, Some((var / n).sqrt()))
}

/// Group summaries, the Kruskal–Wallis omnibus test and every pairwise
/// Mann–Whitney test, per (m, tau).
pub fn compare(
    observations: &[Observation],
    metric: &str,
    grid: Option<(&[usize], &[usize])>,
) -> CliResult<Vec<CompareRow>> {
    let mut cells: BTreeMap<(usize, usize), Groups> = BTreeMap::new();
    for o in observations {
        if let Some((ms, taus)) = grid {
            if !ms.contains(&o.m) || !taus.contains(&o.tau) {
                continue;
            }
        }
        let (rank, name) = group_order(&o.group);
        cells
            .entry((o.m, o.tau))
            .or_default()
            .entry((rank, name.to_string()))
            .or_default()
            .push(o.value);
    }
    if cells.is_empty() {
        return Err(CliError::Data("no rows match the requested (m, tau) grid".into()));
    }

    let mut rows = Vec::new();
    for ((m, tau), groups) in cells {
        if groups.len() < 2 {
            return Err(CliError::Data(format!(
                "m={m} tau={tau}: need at least two groups, found {}",
                groups.len()
            )));
        }
        let samples = groups
            .into_iter()
            .map(|((_, name), values)| GroupSample::new(name, values))
            .collect::<Result<Vec<_>, _>>()?;

        for g in &samples {
            let (mean, se) = mean_and_se(&g.values);
            rows.push(CompareRow {
                group_a: Some(g.name.clone()),
                n_a: Some(g.len()),
                mean: Some(sig12(mean)),
                se: se.map(sig12),
                ..CompareRow::new(m, tau, metric, RowKind::Group)
            });
        }
        let kw = kruskal_wallis(&samples)?;
        rows.push(CompareRow {
            statistic: Some(sig12(kw.statistic)),
            p_value: Some(sig12(kw.p_value)),
            exact: Some(kw.exact),
            ..CompareRow::new(m, tau, metric, RowKind::KruskalWallis)
        });
        for (i, a) in samples.iter().enumerate() {
            for b in &samples[i + 1..] {
                let mw = mann_whitney_u(a, b)?;
                rows.push(CompareRow {
                    group_a: Some(a.name.clone()),
                    group_b: Some(b.name.clone()),
                    n_a: Some(a.len()),
                    n_b: Some(b.len()),
                    statistic: Some(sig12(mw.statistic)),
                    p_value: Some(sig12(mw.p_value)),
                    exact: Some(mw.exact),
                    ..CompareRow::new(m, tau, metric, RowKind::MannWhitney)
                });
            }
        }
    }
    Ok(rows)
}
