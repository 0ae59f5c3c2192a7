//! Seeded test signals and signal degradation.
//!
//! Randomness comes from ChaCha8 seeded with the 64-bit seed via
//! `SeedableRng::seed_from_u64`, and Gaussian draws from `rand_distr`'s
//! `StandardNormal`. Output depends on the seed alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patterns::SampleSeries;

/// Iterations of the logistic map discarded before recording.
pub const LOGISTIC_TRANSIENT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    WhiteGaussian { mean: f64, std_dev: f64 },
    /// `x_t = phi · x_{t−1} + e_t` with unit Gaussian innovations, started
    /// from the stationary distribution.
    Ar1 { phi: f64 },
    LogisticMap { r: f64, x0: f64 },
    Constant { value: f64 },
    /// `low, high, low, high, ...`
    Alternating { low: f64, high: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub length: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, length: usize, seed: u64) -> Self {
        Self { kind, length, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.length < 2 {
            return bad(format!("length must be >= 2, got {}", self.length));
        }
        match self.kind {
            GeneratorKind::WhiteGaussian { mean, std_dev } => {
                if !mean.is_finite() || !(std_dev.is_finite() && std_dev > 0.0) {
                    return bad(format!("white_gaussian needs finite mean and std_dev > 0, got {mean}, {std_dev}"));
                }
            }
            GeneratorKind::Ar1 { phi } => {
                if !(phi > -1.0 && phi < 1.0) {
                    return bad(format!("ar1 coefficient must lie in (-1, 1), got {phi}"));
                }
            }
            GeneratorKind::LogisticMap { r, x0 } => {
                if !(r > 0.0 && r <= 4.0) {
                    return bad(format!("logistic r must lie in (0, 4], got {r}"));
                }
                if !(0.0..=1.0).contains(&x0) {
                    return bad(format!("logistic x0 must lie in [0, 1], got {x0}"));
                }
            }
            GeneratorKind::Constant { value } => {
                if !value.is_finite() {
                    return bad(format!("constant value must be finite, got {value}"));
                }
            }
            GeneratorKind::Alternating { low, high } => {
                if !(low.is_finite() && high.is_finite()) {
                    return bad("alternating levels must be finite".into());
                }
            }
        }
        Ok(())
    }
}

/// Produces the series described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<SampleSeries> {
    spec.validate()?;
    let n = spec.length;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let samples: Vec<f64> = match spec.kind {
        GeneratorKind::WhiteGaussian { mean, std_dev } => (0..n)
            .map(|_| mean + std_dev * rng.sample::<f64, _>(StandardNormal))
            .collect(),
        GeneratorKind::Ar1 { phi } => {
            let mut x = rng.sample::<f64, _>(StandardNormal) / (1.0 - phi * phi).sqrt();
            let mut out = Vec::with_capacity(n);
            out.push(x);
            for _ in 1..n {
                x = phi * x + rng.sample::<f64, _>(StandardNormal);
                out.push(x);
            }
            out
        }
        GeneratorKind::LogisticMap { r, x0 } => {
            let mut x = x0;
            for _ in 0..LOGISTIC_TRANSIENT {
                x = r * x * (1.0 - x);
            }
            (0..n)
                .map(|_| {
                    x = r * x * (1.0 - x);
                    x
                })
                .collect()
        }
        GeneratorKind::Constant { value } => vec![value; n],
        GeneratorKind::Alternating { low, high } => (0..n)
            .map(|i| if i % 2 == 0 { low } else { high })
            .collect(),
    };
    SampleSeries::new(samples)
}

/// Uniform quantization of `[min, max]` into `levels` bins, emitting the bin
/// midpoints. The maximum falls in the top bin. A constant series is returned
/// unchanged.
pub fn quantize(series: &SampleSeries, levels: usize) -> Result<SampleSeries> {
    if levels < 2 {
        return Err(Error::InvalidArgument(format!(
            "quantize: levels must be >= 2, got {levels}"
        )));
    }
    let x = series.samples();
    let (min, max) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = max - min;
    if range == 0.0 {
        return Ok(series.clone());
    }
    let width = range / levels as f64;
    let top = (levels - 1) as f64;
    let out = x
        .iter()
        .map(|&v| {
            let bin = ((v - min) / width).floor().min(top);
            min + (bin + 0.5) * width
        })
        .collect();
    let mut q = SampleSeries::new(out)?;
    if let Some(hz) = series.sample_rate_hz() {
        q = q.with_sample_rate(hz)?;
    }
    if let Some(label) = series.label() {
        q = q.with_label(label);
    }
    Ok(q)
}

/// Mean square of the mean-removed samples.
pub fn signal_power(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

/// Adds zero-mean Gaussian noise whose realized power is exactly
/// `P_signal / 10^(snr_db / 10)`. `snr_db = +inf` returns the input unchanged.
pub fn add_noise_snr(series: &SampleSeries, snr_db: f64, seed: u64) -> Result<SampleSeries> {
    if snr_db == f64::INFINITY {
        return Ok(series.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::InvalidArgument(format!("snr_db must be finite or +inf, got {snr_db}")));
    }
    let x = series.samples();
    let p_signal = signal_power(x);
    if !(p_signal > 0.0) {
        return Err(Error::InvalidArgument(
            "cannot set an SNR on a zero-power series".into(),
        ));
    }
    let p_noise = p_signal / 10f64.powf(snr_db / 10.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise: Vec<f64> = (0..x.len()).map(|_| rng.sample(StandardNormal)).collect();
    let mean = noise.iter().sum::<f64>() / noise.len() as f64;
    noise.iter_mut().for_each(|e| *e -= mean);
    let raw = signal_power(&noise);
    if !(raw > 0.0) {
        return Err(Error::InvalidArgument("degenerate noise draw".into()));
    }
    let scale = (p_noise / raw).sqrt();
    let out = x.iter().zip(&noise).map(|(s, e)| s + scale * e).collect();

    let mut y = SampleSeries::new(out)?;
    if let Some(hz) = series.sample_rate_hz() {
        y = y.with_sample_rate(hz)?;
    }
    if let Some(label) = series.label() {
        y = y.with_label(label);
    }
    Ok(y)
}
