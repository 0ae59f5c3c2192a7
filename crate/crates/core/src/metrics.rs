//! Scalar statistics over pattern distributions.
//!
//! All irreversibility estimators share one subtraction-based divergence,
//! `Δ(a, b) = max(a, b) · |a − b| / (a + b)`, which stays finite when one side of
//! a pair is a forbidden (unobserved) pattern.
//!
//! * **pTIR** compares the forward distribution with the distribution of the
//!   physically reversed series: `½ Σ_π Δ(p_f(π), p_b(π))`.
//! * **pTAS** compares each pattern with its reversed tuple inside the forward
//!   distribution: `Σ_{π, rev π} Δ(p(π), p(rev π))`.
//!
//! With group-rule ties both give the same number. With occurrence-ranked ties
//! (noeTIR / noeTAS) they do not, since a tied window and its reversal both rank
//! as "up".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patterns::{
    extract_all_patterns, EmbeddingConfig, EqualRule, PatternDistribution, PatternKind,
    SampleSeries,
};

/// How individual permutations are tallied in [`dip`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DipMode {
    /// Window counts of individual patterns over the total window count.
    #[default]
    Occurrences,
    /// Distinct individual patterns over distinct observed patterns.
    Distinct,
}

/// Divergence with the larger probability first; `Δ(0, 0) = 0`.
#[inline]
fn delta(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    // Exact for an unpaired pattern, and covers Δ(0, 0).
    if lo == 0.0 {
        hi
    } else {
        hi * (hi - lo) / (hi + lo)
    }
}

/// Subtraction-based probabilistic difference of two probabilities.
pub fn ys_divergence(a: f64, b: f64) -> Result<f64> {
    for p in [a, b] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
    }
    Ok(delta(a, b))
}

fn require_amp(config: &EmbeddingConfig) -> Result<()> {
    match config.kind() {
        PatternKind::AmP => Ok(()),
        k => Err(Error::UnsupportedKind(k.name())),
    }
}

/// Forward–backward divergence between two distributions over the union of
/// their observed patterns.
pub fn tir_divergence(forward: &PatternDistribution, backward: &PatternDistribution) -> f64 {
    let mut sum = 0.0;
    for (p, pf) in forward.probabilities() {
        sum += delta(pf, backward.probability(p.ranks()));
    }
    for (p, pb) in backward.probabilities() {
        if forward.count(p.ranks()) == 0 {
            sum += delta(0.0, pb);
        }
    }
    0.5 * sum
}

/// Symmetric-pair divergence inside one distribution. Each unordered pair
/// `{π, rev π}` with `π ≠ rev π` is visited once.
pub fn tas_divergence(dist: &PatternDistribution) -> f64 {
    let mut sum = 0.0;
    for (p, prob) in dist.probabilities() {
        if p.is_self_symmetric() {
            continue;
        }
        let rev = p.reversed();
        let rev_count = dist.count(rev.ranks());
        if rev_count == 0 || *p < rev {
            sum += delta(prob, dist.probability(rev.ranks()));
        }
    }
    sum
}

/// Permutation time irreversibility: forward pattern distribution against that
/// of the reversed series. Under [`EqualRule::Occurrence`] this is noeTIR.
pub fn p_tir(series: &SampleSeries, config: &EmbeddingConfig) -> Result<f64> {
    require_amp(config)?;
    let forward = extract_all_patterns(series, config)?;
    let backward = extract_all_patterns(&series.reversed(), config)?;
    Ok(tir_divergence(&forward, &backward))
}

/// Permutation temporal asymmetry from the forward distribution alone. Under
/// [`EqualRule::Occurrence`] this is noeTAS.
pub fn p_tas(series: &SampleSeries, config: &EmbeddingConfig) -> Result<f64> {
    require_amp(config)?;
    let forward = extract_all_patterns(series, config)?;
    Ok(tas_divergence(&forward))
}

/// pTIR with occurrence-ranked ties.
pub fn noe_tir(series: &SampleSeries, config: &EmbeddingConfig) -> Result<f64> {
    p_tir(series, &config.with_equal_rule(EqualRule::Occurrence))
}

/// pTAS with occurrence-ranked ties.
pub fn noe_tas(series: &SampleSeries, config: &EmbeddingConfig) -> Result<f64> {
    p_tas(series, &config.with_equal_rule(EqualRule::Occurrence))
}

/// The four estimators at `m = 2` written in terms of the up, down and equal
/// probabilities of an ascending series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M2Estimators {
    pub p_tir: f64,
    pub noe_tir: f64,
    pub p_tas: f64,
    pub noe_tas: f64,
}

/// Closed forms at `m = 2`. Occurrence ranking turns every equal pair into
/// "up" in both the forward and the backward series.
pub fn m2_closed_forms(up: f64, down: f64, equal: f64) -> Result<M2Estimators> {
    for p in [up, down, equal] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
    }
    let total = up + down + equal;
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "up + down + equal must be 1, got {total}"
        )));
    }
    Ok(M2Estimators {
        p_tir: 0.5 * (delta(up, down) + delta(down, up)),
        noe_tir: 0.5 * (delta(up + equal, down + equal) + delta(down, up)),
        p_tas: delta(up, down),
        noe_tas: delta(up + equal, down),
    })
}

/// Shannon entropy (natural log) of the observed pattern probabilities.
pub fn permutation_entropy(dist: &PatternDistribution) -> f64 {
    let h: f64 = dist
        .probabilities()
        .filter(|&(_, p)| p > 0.0)
        .map(|(_, p)| -p * p.ln())
        .sum();
    // A single pattern gives -1 * ln 1 = -0.0.
    h.max(0.0)
}

/// Distribution of equal states: share of lag-`tau` sample pairs whose
/// absolute difference is at most `threshold`.
pub fn des(series: &SampleSeries, tau: usize, threshold: f64) -> Result<f64> {
    if tau == 0 {
        return Err(Error::InvalidArgument("des: tau must be >= 1".into()));
    }
    if !(threshold >= 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "des: threshold must be finite and non-negative, got {threshold}"
        )));
    }
    let x = series.samples();
    if x.len() <= tau {
        return Err(Error::SeriesTooShort {
            len: x.len(),
            needed: tau + 1,
        });
    }
    let pairs = x.len() - tau;
    let equal = x
        .iter()
        .zip(&x[tau..])
        .filter(|(a, b)| (*b - *a).abs() <= threshold)
        .count();
    Ok(equal as f64 / pairs as f64)
}

/// Distribution of individual permutations: observed, non-self-symmetric
/// patterns whose reversal was never observed.
pub fn dip(dist: &PatternDistribution, mode: DipMode) -> f64 {
    let individual = dist
        .counts()
        .iter()
        .filter(|(p, _)| !p.is_self_symmetric() && dist.count(p.reversed().ranks()) == 0);
    match mode {
        DipMode::Occurrences => {
            let n: u64 = individual.map(|(_, &c)| c).sum();
            n as f64 / dist.total() as f64
        }
        DipMode::Distinct => individual.count() as f64 / dist.len() as f64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricOptions {
    pub dip_mode: DipMode,
    pub des_threshold: f64,
}

/// The per-epoch feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub epoch_id: String,
    pub config: EmbeddingConfig,
    pub n_windows: u64,
    pub p_tir: f64,
    pub p_tas: f64,
    pub noe_tir: f64,
    pub noe_tas: f64,
    pub pen: f64,
    pub des: f64,
    pub dip: f64,
}

/// Every statistic for one series and configuration. pTIR, pTAS, PEn and DIP
/// use the configured tie rule; noeTIR and noeTAS always rank ties by
/// occurrence. `config` must use AmP.
pub fn compute_metrics(
    series: &SampleSeries,
    config: &EmbeddingConfig,
    options: &MetricOptions,
) -> Result<MetricsRecord> {
    require_amp(config)?;
    let reversed = series.reversed();
    let forward = extract_all_patterns(series, config)?;
    let backward = extract_all_patterns(&reversed, config)?;

    let (noe_tir, noe_tas) = if config.equal_rule() == EqualRule::Occurrence {
        (tir_divergence(&forward, &backward), tas_divergence(&forward))
    } else {
        let occ = config.with_equal_rule(EqualRule::Occurrence);
        let f = extract_all_patterns(series, &occ)?;
        let b = extract_all_patterns(&reversed, &occ)?;
        (tir_divergence(&f, &b), tas_divergence(&f))
    };

    Ok(MetricsRecord {
        epoch_id: series.label().unwrap_or_default().to_string(),
        config: *config,
        n_windows: forward.total(),
        p_tir: tir_divergence(&forward, &backward),
        p_tas: tas_divergence(&forward),
        noe_tir,
        noe_tas,
        pen: permutation_entropy(&forward),
        des: des(series, config.tau(), options.des_threshold)?,
        dip: dip(&forward, options.dip_mode),
    })
}
