//! Inputs shared by the benchmarks.

use ordinal_tir::synth::{generate, quantize, GeneratorKind, GeneratorSpec};
use ordinal_tir::SampleSeries;

/// One 60 s epoch at 250 Hz.
pub const EPOCH_LEN: usize = 15_000;

/// Seeded AR(1) signal quantized to 12-bit resolution, so ties occur at the
/// rate of a typical digitized recording.
pub fn epoch(seed: u64) -> SampleSeries {
    let s = generate(&GeneratorSpec::new(GeneratorKind::Ar1 { phi: 0.9 }, EPOCH_LEN, seed))
        .expect("valid generator");
    quantize(&s, 4096).expect("valid level count")
}

#[cfg(test)]
mod tests {
    #[test]
    fn epoch_is_deterministic() {
        assert_eq!(super::epoch(3), super::epoch(3));
        assert_eq!(super::epoch(3).len(), super::EPOCH_LEN);
    }
}
