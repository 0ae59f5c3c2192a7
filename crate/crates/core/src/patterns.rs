//! Ordinal pattern extraction.
//!
//! A window of `m` samples is summarized by a tuple of 1-based ranks. Two
//! readings of the sorted window exist:
//!
//! * **OrP** (original permutation): entry `k` is the position, in the original
//!   window, of the `k`-th sorted value (an argsort).
//! * **AmP** (amplitude permutation): entry `i` is the rank of the `i`-th
//!   original value inside the sorted window.
//!
//! Sorting is always stable, so tied values first receive consecutive ranks in
//! order of occurrence. [`EqualRule::GroupSmallest`] and
//! [`EqualRule::GroupLargest`] then collapse every tied group onto its smallest
//! or largest occurrence-order rank. Ties are exact floating-point equality.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest embedding dimension accepted; ranks are stored as `u8`.
pub const MAX_DIMENSION: usize = u8::MAX as usize;

/// Largest dimension for which [`enumerate_patterns`] will brute-force the
/// `m^m` alphabet windows.
pub const MAX_ENUMERATION_DIMENSION: usize = 7;

/// A finite, non-empty sequence of finite samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSeries {
    samples: Vec<f64>,
    sample_rate_hz: Option<f64>,
    label: Option<String>,
}

impl SampleSeries {
    /// Validates the samples. Negative zero is folded into positive zero so
    /// that tie detection only ever sees one representation of zero.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySeries);
        }
        let mut samples = samples;
        for (index, x) in samples.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if *x == 0.0 {
                *x = 0.0;
            }
        }
        Ok(Self {
            samples,
            sample_rate_hz: None,
            label: None,
        })
    }

    pub fn with_sample_rate(mut self, hz: f64) -> Result<Self> {
        if !(hz.is_finite() && hz > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sample rate must be positive, got {hz}"
            )));
        }
        self.sample_rate_hz = Some(hz);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> Option<f64> {
        self.sample_rate_hz
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// The time-reversed series, keeping metadata.
    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        Self {
            samples,
            sample_rate_hz: self.sample_rate_hz,
            label: self.label.clone(),
        }
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    #[default]
    Ascending,
    Descending,
}

/// Treatment of tied samples inside a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualRule {
    /// Ties keep consecutive ranks in order of occurrence.
    Occurrence,
    /// Every member of a tied group takes the group's smallest rank.
    #[default]
    GroupSmallest,
    /// Every member of a tied group takes the group's largest rank.
    GroupLargest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum PatternKind {
    #[serde(rename = "orp")]
    OrP,
    #[default]
    #[serde(rename = "amp")]
    AmP,
}

impl PatternKind {
    pub fn name(self) -> &'static str {
        match self {
            PatternKind::OrP => "OrP",
            PatternKind::AmP => "AmP",
        }
    }
}

/// Embedding dimension, delay and ranking conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    m: usize,
    tau: usize,
    order: Order,
    equal_rule: EqualRule,
    kind: PatternKind,
}

impl EmbeddingConfig {
    /// Ascending order, group-smallest ties and AmP by default.
    pub fn new(m: usize, tau: usize) -> Result<Self> {
        if !(2..=MAX_DIMENSION).contains(&m) {
            return Err(Error::InvalidEmbedding(format!(
                "dimension m must be in 2..={MAX_DIMENSION}, got {m}"
            )));
        }
        if tau == 0 {
            return Err(Error::InvalidEmbedding("delay tau must be >= 1".into()));
        }
        if (m - 1).checked_mul(tau).is_none() {
            return Err(Error::InvalidEmbedding(format!(
                "window span overflows for m={m}, tau={tau}"
            )));
        }
        Ok(Self {
            m,
            tau,
            order: Order::default(),
            equal_rule: EqualRule::default(),
            kind: PatternKind::default(),
        })
    }

    pub fn with_order(mut self, order: Order) -> Self {
        self.order = order;
        self
    }

    pub fn with_equal_rule(mut self, equal_rule: EqualRule) -> Self {
        self.equal_rule = equal_rule;
        self
    }

    pub fn with_kind(mut self, kind: PatternKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn equal_rule(&self) -> EqualRule {
        self.equal_rule
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    /// Number of samples covered by one window: `(m - 1) * tau + 1`.
    pub fn span(&self) -> usize {
        (self.m - 1) * self.tau + 1
    }

    /// Number of windows in a series of length `len`, if any fit.
    pub fn window_count(&self, len: usize) -> Option<usize> {
        len.checked_sub(self.span()).map(|r| r + 1)
    }
}

/// An ordinal pattern: a tuple of 1-based ranks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(SmallVec<[u8; 8]>);

impl Pattern {
    /// Builds a pattern from raw ranks. Every rank must lie in `1..=len`.
    pub fn new(ranks: &[u8]) -> Result<Self> {
        let m = ranks.len();
        if !(1..=MAX_DIMENSION).contains(&m) {
            return Err(Error::InvalidArgument(format!("pattern length {m}")));
        }
        if let Some(r) = ranks.iter().find(|&&r| r == 0 || r as usize > m) {
            return Err(Error::InvalidArgument(format!(
                "rank {r} outside 1..={m}"
            )));
        }
        Ok(Self(SmallVec::from_slice(ranks)))
    }

    pub fn ranks(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn is_self_symmetric(&self) -> bool {
        let r = &self.0;
        r.iter().eq(r.iter().rev())
    }
}

impl Borrow<[u8]> for Pattern {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

/// Reads the pattern back to front. On group-rule AmPs this is the pattern of
/// the time-reversed window.
pub fn reverse_pattern(p: &Pattern) -> Pattern {
    p.reversed()
}

pub fn is_self_symmetric(p: &Pattern) -> bool {
    p.is_self_symmetric()
}

/// Reusable buffers for ranking windows without per-window allocation.
#[derive(Debug, Default)]
struct Ranker {
    order: Vec<usize>,
    group: Vec<usize>,
    out: Vec<u8>,
}

impl Ranker {
    fn rank(&mut self, window: &[f64], config: &EmbeddingConfig) -> &[u8] {
        let m = window.len();
        self.order.clear();
        self.order.extend(0..m);
        // Stable: equal values stay in order of occurrence.
        match config.order {
            Order::Ascending => self
                .order
                .sort_by(|&a, &b| window[a].partial_cmp(&window[b]).unwrap_or(Ordering::Equal)),
            Order::Descending => self
                .order
                .sort_by(|&a, &b| window[b].partial_cmp(&window[a]).unwrap_or(Ordering::Equal)),
        }

        // group[k]: the sorted position whose rank sorted position k adopts.
        self.group.clear();
        self.group.extend(0..m);
        match config.equal_rule {
            EqualRule::Occurrence => {}
            EqualRule::GroupSmallest => {
                for k in 1..m {
                    if window[self.order[k]] == window[self.order[k - 1]] {
                        self.group[k] = self.group[k - 1];
                    }
                }
            }
            EqualRule::GroupLargest => {
                for k in (0..m.saturating_sub(1)).rev() {
                    if window[self.order[k]] == window[self.order[k + 1]] {
                        self.group[k] = self.group[k + 1];
                    }
                }
            }
        }

        self.out.clear();
        self.out.resize(m, 0);
        match config.kind {
            PatternKind::OrP => {
                for k in 0..m {
                    self.out[k] = (self.order[self.group[k]] + 1) as u8;
                }
            }
            PatternKind::AmP => {
                for k in 0..m {
                    self.out[self.order[k]] = (self.group[k] + 1) as u8;
                }
            }
        }
        &self.out
    }
}

/// Ordinal pattern of a single window of exactly `config.m()` samples.
pub fn extract_pattern(window: &[f64], config: &EmbeddingConfig) -> Result<Pattern> {
    if window.len() != config.m {
        return Err(Error::DimensionMismatch {
            expected: config.m,
            got: window.len(),
        });
    }
    if let Some(index) = window.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut ranker = Ranker::default();
    Ok(Pattern(SmallVec::from_slice(ranker.rank(window, config))))
}

/// Pattern counts over all delay-embedded windows of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternDistribution {
    counts: BTreeMap<Pattern, u64>,
    total: u64,
    config: EmbeddingConfig,
}

impl PatternDistribution {
    /// Builds a distribution from explicit counts. Zero counts are dropped.
    pub fn from_counts(
        counts: impl IntoIterator<Item = (Pattern, u64)>,
        config: EmbeddingConfig,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = 0u64;
        for (p, c) in counts {
            if p.len() != config.m {
                return Err(Error::DimensionMismatch {
                    expected: config.m,
                    got: p.len(),
                });
            }
            if c > 0 {
                *map.entry(p).or_insert(0) += c;
                total += c;
            }
        }
        if total == 0 {
            return Err(Error::InvalidArgument(
                "distribution must contain at least one window".into(),
            ));
        }
        Ok(Self {
            counts: map,
            total,
            config,
        })
    }

    pub fn counts(&self) -> &BTreeMap<Pattern, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn config(&self) -> &EmbeddingConfig {
        &self.config
    }

    /// Number of distinct observed patterns.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, pattern: &[u8]) -> u64 {
        self.counts.get(pattern).copied().unwrap_or(0)
    }

    pub fn probability(&self, pattern: &[u8]) -> f64 {
        self.count(pattern) as f64 / self.total as f64
    }

    /// Observed patterns with their probabilities, in pattern order.
    pub fn probabilities(&self) -> impl Iterator<Item = (&Pattern, f64)> + '_ {
        let total = self.total as f64;
        self.counts.iter().map(move |(p, &c)| (p, c as f64 / total))
    }
}

/// Slides a window of span `(m - 1) * tau + 1` with stride 1 over the series and
/// counts the patterns of the `m` samples at offsets `0, tau, ..., (m - 1) * tau`.
pub fn extract_all_patterns(
    series: &SampleSeries,
    config: &EmbeddingConfig,
) -> Result<PatternDistribution> {
    let x = series.samples();
    let n_windows = config
        .window_count(x.len())
        .ok_or(Error::SeriesTooShort {
            len: x.len(),
            needed: config.span(),
        })?;

    let mut ranker = Ranker::default();
    let mut window = vec![0.0; config.m];
    let mut counts: BTreeMap<Pattern, u64> = BTreeMap::new();
    for t in 0..n_windows {
        for (j, w) in window.iter_mut().enumerate() {
            *w = x[t + j * config.tau];
        }
        let ranks = ranker.rank(&window, config);
        match counts.get_mut(ranks) {
            Some(c) => *c += 1,
            None => {
                counts.insert(Pattern(SmallVec::from_slice(ranks)), 1);
            }
        }
    }
    Ok(PatternDistribution {
        counts,
        total: n_windows as u64,
        config: *config,
    })
}

/// All admissible ascending AmPs of dimension `m` under `equal_rule`, found by
/// ranking every window over the alphabet `{1..m}`.
pub fn enumerate_patterns(m: usize, equal_rule: EqualRule) -> Result<BTreeSet<Pattern>> {
    if !(2..=MAX_ENUMERATION_DIMENSION).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "enumeration supports 2 <= m <= {MAX_ENUMERATION_DIMENSION}, got {m}"
        )));
    }
    let config = EmbeddingConfig::new(m, 1)?.with_equal_rule(equal_rule);
    let mut ranker = Ranker::default();
    let mut digits = vec![0usize; m];
    let mut window = vec![0.0; m];
    let mut seen = BTreeSet::new();
    loop {
        for (w, &d) in window.iter_mut().zip(&digits) {
            *w = (d + 1) as f64;
        }
        let ranks = ranker.rank(&window, &config);
        if !seen.contains(ranks) {
            seen.insert(Pattern(SmallVec::from_slice(ranks)));
        }
        // Odometer increment over base-m digits.
        let mut i = 0;
        loop {
            if i == m {
                return Ok(seen);
            }
            digits[i] += 1;
            if digits[i] < m {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
