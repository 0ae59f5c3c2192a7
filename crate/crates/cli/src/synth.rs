use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ordinal_tir::synth::{add_noise_snr, generate, quantize, signal_power, GeneratorSpec};
use ordinal_tir::SampleSeries;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// XORed into the generator seed to seed the noise stream.
const NOISE_SEED_MIX: u64 = 0x6e6f_6973_655f_7331;

/// Everything needed to regenerate a synthetic signal bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: GeneratorSpec,
    pub snr_db: Option<f64>,
    pub noise_seed: Option<u64>,
    pub quantize_levels: Option<usize>,
    /// Mean-removed power of the clean generator output.
    pub signal_power: f64,
    /// Mean-removed power of the noise actually added.
    pub realized_noise_power: Option<f64>,
    pub samples: usize,
}

impl Manifest {
    pub fn new(generator: GeneratorSpec, snr_db: Option<f64>, quantize_levels: Option<usize>) -> Self {
        Self {
            generator,
            snr_db,
            noise_seed: snr_db.map(|_| generator.seed ^ NOISE_SEED_MIX),
            quantize_levels,
            signal_power: 0.0,
            realized_noise_power: None,
            samples: generator.length,
        }
    }
}

/// Generates, adds noise, then quantizes, filling in the measured powers.
pub fn synthesize(manifest: &Manifest) -> CliResult<(SampleSeries, Manifest)> {
    let mut manifest = manifest.clone();
    manifest.generator.validate().map_err(CliError::usage)?;
    let clean = generate(&manifest.generator)?;
    manifest.signal_power = signal_power(clean.samples());
    manifest.samples = clean.len();

    let mut series = clean.clone();
    if let Some(snr) = manifest.snr_db {
        if !snr.is_finite() {
            return Err(CliError::Usage(format!("--snr-db must be finite, got {snr}")));
        }
        let seed = manifest.noise_seed.unwrap_or(manifest.generator.seed ^ NOISE_SEED_MIX);
        manifest.noise_seed = Some(seed);
        series = add_noise_snr(&clean, snr, seed)?;
        let noise: Vec<f64> =
            series.samples().iter().zip(clean.samples()).map(|(y, x)| y - x).collect();
        manifest.realized_noise_power = Some(signal_power(&noise));
    }
    if let Some(levels) = manifest.quantize_levels {
        series = quantize(&series, levels).map_err(CliError::usage)?;
    }
    Ok((series, manifest))
}

/// Single-column CSV with a `value` header; every sample round-trips exactly.
pub fn write_signal(path: &Path, series: &SampleSeries) -> CliResult<()> {
    let f = File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(f);
    writeln!(w, "value")?;
    for v in series.samples() {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn default_manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> CliResult<()> {
    let text = serde_json::to_string_pretty(manifest)?;
    fs::write(path, text + "\n")
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn read_manifest(path: &Path) -> CliResult<Manifest> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: bad manifest: {e}", path.display())))
}
