//! Time irreversibility, temporal asymmetry and related permutation statistics
//! of sampled time series, built on ordinal patterns with explicit handling of
//! equal (tied) values.
//!
//! The crate is organized bottom-up:
//!
//! * [`patterns`] extracts original (OrP) and amplitude (AmP) permutations from
//!   delay-embedded windows and counts them into a [`PatternDistribution`].
//! * [`metrics`] turns distributions into scalar statistics: the subtraction
//!   based divergence, pTIR / pTAS and their tie-unaware counterparts, permutation
//!   entropy, the distribution of equal states and of individual permutations.
//! * [`stats`] holds the Mann–Whitney U and Kruskal–Wallis rank tests used to
//!   compare groups of epochs.
//! * [`synth`] generates seeded test signals and degrades them (quantization,
//!   additive noise at a given SNR).
//! * [`ingest`] reads signal and stage-label CSV files and cuts labeled epochs.

pub mod error;
pub mod ingest;
pub mod metrics;
pub mod patterns;
pub mod special;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use metrics::{
    compute_metrics, des, dip, m2_closed_forms, noe_tas, noe_tir, p_tas, p_tir,
    permutation_entropy, ys_divergence, DipMode, M2Estimators, MetricOptions, MetricsRecord,
};
pub use patterns::{
    enumerate_patterns, extract_all_patterns, extract_pattern, is_self_symmetric,
    reverse_pattern, EmbeddingConfig, EqualRule, Order, Pattern, PatternDistribution,
    PatternKind, SampleSeries,
};
pub use stats::{chi_square_sf, kruskal_wallis, mann_whitney_u, GroupComparison, GroupSample, RankTest};
