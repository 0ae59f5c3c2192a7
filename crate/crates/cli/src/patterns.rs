use ordinal_tir::{extract_all_patterns, EmbeddingConfig, SampleSeries};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::sig12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternRow {
    pub m: usize,
    pub tau: usize,
    pub pattern: String,
    pub count: u64,
    pub probability: f64,
    pub self_symmetric: bool,
    /// Observed while its reversal never is.
    pub individual: bool,
}

/// Distribution rows for each grid point, patterns in lexicographic order.
pub fn pattern_rows(series: &SampleSeries, grid: &[EmbeddingConfig]) -> CliResult<Vec<PatternRow>> {
    let mut rows = Vec::new();
    for c in grid {
        if c.window_count(series.len()).unwrap_or(0) == 0 {
            return Err(CliError::Usage(format!(
                "m={} tau={} spans {} samples but the signal has {}",
                c.m(),
                c.tau(),
                c.span(),
                series.len()
            )));
        }
        let dist = extract_all_patterns(series, c)?;
        for (p, count) in dist.counts() {
            let symmetric = p.is_self_symmetric();
            rows.push(PatternRow {
                m: c.m(),
                tau: c.tau(),
                pattern: p.to_string(),
                count: *count,
                probability: sig12(*count as f64 / dist.total() as f64),
                self_symmetric: symmetric,
                individual: !symmetric && dist.count(p.reversed().ranks()) == 0,
            });
        }
    }
    Ok(rows)
}
