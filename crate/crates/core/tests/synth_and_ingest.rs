use std::io::Write;

use ordinal_tir::ingest::{
    read_signal_csv, read_stage_labels, segment_epochs, ColumnSelector, EpochSpec, LabelOptions,
    StageLabel,
};
use ordinal_tir::metrics::des;
use ordinal_tir::patterns::{extract_all_patterns, EmbeddingConfig, SampleSeries};
use ordinal_tir::synth::{generate, quantize, GeneratorKind, GeneratorSpec};
use proptest::prelude::*;

#[test]
fn logistic_map_never_falls_three_times() {
    let s = generate(&GeneratorSpec::new(GeneratorKind::LogisticMap { r: 4.0, x0: 0.3141 }, 100_000, 0)).unwrap();
    // Direct scan, independent of pattern extraction.
    let x = s.samples();
    assert!(!x.windows(3).any(|w| w[0] > w[1] && w[1] > w[2]));
    let d = extract_all_patterns(&s, &EmbeddingConfig::new(3, 1).unwrap()).unwrap();
    assert_eq!(d.count(&[3, 2, 1]), 0);
    assert_eq!(d.len(), 5);
}

proptest! {
    #[test]
    fn quantize_keeps_order_and_ties(
        x in prop::collection::vec(-100.0f64..100.0, 2..200),
        levels in 2usize..64,
    ) {
        let mut x = x;
        // seed some exact ties
        let n = x.len();
        x[n / 2] = x[0];
        let s = SampleSeries::new(x.clone()).unwrap();
        let q = quantize(&s, levels).unwrap();
        let y = q.samples();
        let distinct: std::collections::BTreeSet<u64> = y.iter().map(|v| v.to_bits()).collect();
        prop_assert!(distinct.len() <= levels);
        for i in 0..n {
            for j in 0..n {
                if x[i] == x[j] {
                    prop_assert_eq!(y[i], y[j]);
                }
                if x[i] < x[j] {
                    prop_assert!(y[i] <= y[j]);
                }
            }
        }
    }

    #[test]
    fn coarser_nested_quantization_never_lowers_des(
        x in prop::collection::vec(-1.0f64..1.0, 10..300),
        tau in 1usize..4,
    ) {
        let s = SampleSeries::new(x).unwrap();
        let mut last = -1.0;
        for levels in [4096usize, 1024, 256, 64, 16, 4, 2] {
            let d = des(&quantize(&s, levels).unwrap(), tau, 0.0).unwrap();
            prop_assert!(d >= last, "levels {levels}: {d} < {last}");
            last = d;
        }
    }

    #[test]
    fn integer_grid_survives_fine_quantization(
        x in prop::collection::vec(0u8..10, 10..100),
        extra in 0usize..20,
    ) {
        let mut x: Vec<f64> = x.into_iter().map(f64::from).collect();
        x.push(0.0);
        x.push(9.0);
        let s = SampleSeries::new(x).unwrap();
        let q = quantize(&s, 10 + extra).unwrap();
        let c = EmbeddingConfig::new(3, 1).unwrap();
        prop_assert_eq!(
            extract_all_patterns(&s, &c).unwrap().counts().clone(),
            extract_all_patterns(&q, &c).unwrap().counts().clone()
        );
        prop_assert_eq!(des(&s, 1, 0.0).unwrap(), des(&q, 1, 0.0).unwrap());
    }
}

#[test]
fn non_nested_levels_can_lower_des() {
    // Bin edges at 1/2 split 0.45 | 0.55; with 3 levels both share [1/3, 2/3).
    let s = SampleSeries::new(vec![0.0, 1.0, 0.45, 0.55]).unwrap();
    let coarse = des(&quantize(&s, 2).unwrap(), 1, 0.0).unwrap();
    let fine = des(&quantize(&s, 3).unwrap(), 1, 0.0).unwrap();
    assert!(coarse < fine);
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
    path
}

#[test]
fn files_to_epochs() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("t,eeg\n");
    for i in 0..100 {
        body.push_str(&format!("{i},{}\n", (i * 7 % 13) as f64 - 6.5));
    }
    let sig = write(&dir, "sig.csv", &body);
    let lab = write(&dir, "lab.csv", "start_sample,stage\n0,wake\n40,S2\n65,REM\n");

    let s = read_signal_csv(&sig, &ColumnSelector::Name("eeg".into())).unwrap();
    assert_eq!(s.len(), 100);
    let labels = read_stage_labels(&lab, &LabelOptions::default()).unwrap();
    let spec = EpochSpec {
        epoch_seconds: 2.0,
        sample_rate_hz: 10.0,
        min_length_seconds: 1.0,
        amplitude_ceiling: None,
    };
    let epochs = segment_epochs(&s, &labels, &spec, "sig").unwrap();
    let got: Vec<_> = epochs.iter().map(|e| (e.start_sample, e.stage.as_str())).collect();
    assert_eq!(got, vec![(0, "wake"), (20, "wake"), (40, "S2"), (80, "REM")]);
    for e in &epochs {
        assert_eq!(e.series.samples(), &s.samples()[e.start_sample..e.start_sample + 20]);
    }
}

fn labels_strategy(len: usize) -> impl Strategy<Value = Vec<StageLabel>> {
    prop::collection::btree_set(0..len, 0..8).prop_map(|starts| {
        starts
            .into_iter()
            .enumerate()
            .map(|(i, s)| StageLabel {
                start_sample: s,
                stage: ["wake", "S1", "S2", "S3", "REM"][i % 5].to_string(),
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn segmentation_invariants(
        (len, labels) in (50usize..400).prop_flat_map(|len| (Just(len), labels_strategy(len))),
        epoch in 2usize..40,
    ) {
        let s = SampleSeries::new((0..len).map(|i| i as f64).collect()).unwrap();
        let spec = EpochSpec {
            epoch_seconds: epoch as f64,
            sample_rate_hz: 1.0,
            min_length_seconds: 1.0,
            amplitude_ceiling: None,
        };
        let epochs = segment_epochs(&s, &labels, &spec, "x").unwrap();
        prop_assert!(epochs.len() <= len / epoch);
        let mut prev_end = 0;
        for e in &epochs {
            prop_assert_eq!(e.start_sample % epoch, 0);
            prop_assert!(e.start_sample >= prev_end);
            prev_end = e.start_sample + epoch;
            prop_assert_eq!(e.series.samples(), &s.samples()[e.start_sample..prev_end]);
            // no label boundary strictly inside the epoch
            prop_assert!(!labels.iter().any(|l| l.start_sample > e.start_sample && l.start_sample < prev_end));
            match labels.iter().rev().find(|l| l.start_sample <= e.start_sample) {
                Some(owner) => prop_assert_eq!(&owner.stage, &e.stage),
                None => {
                    prop_assert!(labels.is_empty());
                    prop_assert_eq!(e.stage.as_str(), ordinal_tir::ingest::UNLABELED);
                }
            }
        }
    }
}

#[test]
fn ar1_estimate_shrinks_with_length_inside_the_noise_envelope() {
    let c = EmbeddingConfig::new(3, 1).unwrap();
    let median = |kind: GeneratorKind, len: usize| {
        let mut v: Vec<f64> = (0..60)
            .map(|seed| ordinal_tir::p_tir(&generate(&GeneratorSpec::new(kind, len, seed)).unwrap(), &c).unwrap())
            .collect();
        v.sort_by(f64::total_cmp);
        (v[29] + v[30]) / 2.0
    };
    let ar1 = GeneratorKind::Ar1 { phi: 0.8 };
    let m: Vec<f64> = [1_000, 10_000, 100_000].into_iter().map(|n| median(ar1, n)).collect();
    assert!(m[0] > m[1] && m[1] > m[2], "{m:?}");

    // 95th percentile of white-noise pTIR at the same length.
    let mut null: Vec<f64> = (1000..1100)
        .map(|seed| {
            let w = GeneratorKind::WhiteGaussian { mean: 0.0, std_dev: 1.0 };
            ordinal_tir::p_tir(&generate(&GeneratorSpec::new(w, 15_000, seed)).unwrap(), &c).unwrap()
        })
        .collect();
    null.sort_by(f64::total_cmp);
    assert!(median(ar1, 15_000) < null[94]);
}
