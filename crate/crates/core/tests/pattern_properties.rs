use ordinal_tir::patterns::{
    enumerate_patterns, extract_all_patterns, extract_pattern, reverse_pattern, EmbeddingConfig,
    EqualRule, Order, Pattern, PatternKind, SampleSeries,
};
use proptest::prelude::*;

fn config(m: usize, rule: EqualRule, kind: PatternKind) -> EmbeddingConfig {
    EmbeddingConfig::new(m, 1).unwrap().with_equal_rule(rule).with_kind(kind)
}

/// Every window of length `m` over the alphabet `{1..k}`.
fn all_windows(m: usize, k: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=k).map(move |v| {
                    let mut w = w.clone();
                    w.push(v as f64);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn reversal_commutes_for_group_ranks() {
    for rule in [EqualRule::GroupSmallest, EqualRule::GroupLargest] {
        for m in 2..=4 {
            let c = config(m, rule, PatternKind::AmP);
            for w in all_windows(m, 4) {
                let mut r = w.clone();
                r.reverse();
                let fwd = extract_pattern(&w, &c).unwrap();
                assert_eq!(extract_pattern(&r, &c).unwrap(), reverse_pattern(&fwd), "{w:?}");
            }
        }
    }
}

#[test]
fn reversal_fails_for_occurrence_ranks() {
    let c = config(2, EqualRule::Occurrence, PatternKind::AmP);
    let counterexamples: Vec<_> = all_windows(2, 2)
        .into_iter()
        .filter(|w| {
            let r = [w[1], w[0]];
            extract_pattern(&r, &c).unwrap() != reverse_pattern(&extract_pattern(w, &c).unwrap())
        })
        .collect();
    assert_eq!(counterexamples, vec![vec![1.0, 1.0], vec![2.0, 2.0]]);
}

#[test]
fn group_smallest_taxonomy_at_m3() {
    let c = config(3, EqualRule::GroupSmallest, PatternKind::AmP);
    let seen: std::collections::BTreeSet<Pattern> = all_windows(3, 3)
        .iter()
        .map(|w| extract_pattern(w, &c).unwrap())
        .collect();
    assert_eq!(seen.len(), 13);
    assert_eq!(seen, enumerate_patterns(3, EqualRule::GroupSmallest).unwrap());
    let symmetric: Vec<String> = seen
        .iter()
        .filter(|p| p.is_self_symmetric())
        .map(|p| p.to_string())
        .collect();
    assert_eq!(symmetric, vec!["(1,1,1)", "(1,3,1)", "(2,1,2)"]);
}

/// Group-smallest ranks arise from a permutation by collapsing each tied run
/// onto its minimum: the ranks `r` used with multiplicity `c_r` satisfy that
/// the next used rank is `r + c_r`.
fn is_collapsed_permutation(ranks: &[u8]) -> bool {
    let mut counts = vec![0usize; ranks.len() + 2];
    for &r in ranks {
        counts[r as usize] += 1;
    }
    let mut expected = 1;
    while expected <= ranks.len() {
        let c = counts[expected];
        if c == 0 {
            return false;
        }
        expected += c;
    }
    expected == ranks.len() + 1
}

fn window_strategy() -> impl Strategy<Value = Vec<f64>> {
    (2usize..=7).prop_flat_map(|m| prop::collection::vec((0i32..6).prop_map(f64::from), m))
}

fn distinct_window() -> impl Strategy<Value = Vec<f64>> {
    (2usize..=8).prop_flat_map(|m| {
        Just((0..m).map(|i| i as f64).collect::<Vec<_>>()).prop_shuffle()
    })
}

proptest! {
    #[test]
    fn rank_tuples_are_admissible(w in window_strategy()) {
        let m = w.len();
        let occ = extract_pattern(&w, &config(m, EqualRule::Occurrence, PatternKind::AmP)).unwrap();
        let mut sorted = occ.ranks().to_vec();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (1..=m as u8).collect::<Vec<_>>());
        let grp = extract_pattern(&w, &config(m, EqualRule::GroupSmallest, PatternKind::AmP)).unwrap();
        prop_assert!(is_collapsed_permutation(grp.ranks()));
        // Tied samples share a rank, distinct samples never do.
        for i in 0..m {
            for j in 0..m {
                prop_assert_eq!(w[i] == w[j], grp.ranks()[i] == grp.ranks()[j]);
            }
        }
    }

    #[test]
    fn orp_and_amp_are_inverse_without_ties(w in distinct_window()) {
        let m = w.len();
        let orp = extract_pattern(&w, &config(m, EqualRule::GroupSmallest, PatternKind::OrP)).unwrap();
        let amp = extract_pattern(&w, &config(m, EqualRule::GroupSmallest, PatternKind::AmP)).unwrap();
        for k in 0..m {
            prop_assert_eq!(amp.ranks()[orp.ranks()[k] as usize - 1] as usize, k + 1);
        }
    }

    #[test]
    fn negation_reverses_orp_without_ties(w in distinct_window()) {
        let m = w.len();
        let c = config(m, EqualRule::GroupSmallest, PatternKind::OrP);
        let neg: Vec<f64> = w.iter().map(|v| -v).collect();
        prop_assert_eq!(
            extract_pattern(&neg, &c).unwrap(),
            reverse_pattern(&extract_pattern(&w, &c).unwrap())
        );
        // Descending order is the ascending order of the negated window.
        let desc = c.with_order(Order::Descending);
        prop_assert_eq!(extract_pattern(&w, &desc).unwrap(), extract_pattern(&neg, &c).unwrap());
    }

    #[test]
    fn strictly_increasing_maps_preserve_patterns(
        w in window_strategy(),
        shift in -50.0f64..50.0,
        scale in 0.1f64..10.0,
    ) {
        let m = w.len();
        let mapped: Vec<f64> = w.iter().map(|v| (scale * v + shift).exp()).collect();
        for rule in [EqualRule::Occurrence, EqualRule::GroupSmallest, EqualRule::GroupLargest] {
            for kind in [PatternKind::OrP, PatternKind::AmP] {
                let c = config(m, rule, kind);
                prop_assert_eq!(extract_pattern(&w, &c).unwrap(), extract_pattern(&mapped, &c).unwrap());
            }
        }
    }

    #[test]
    fn distribution_totals(
        x in prop::collection::vec((0i32..4).prop_map(f64::from), 1..200),
        m in 2usize..6,
        tau in 1usize..5,
    ) {
        let s = SampleSeries::new(x.clone()).unwrap();
        let c = EmbeddingConfig::new(m, tau).unwrap();
        let span = (m - 1) * tau + 1;
        match extract_all_patterns(&s, &c) {
            Ok(d) => {
                prop_assert_eq!(d.total() as usize, x.len() - (m - 1) * tau);
                prop_assert_eq!(d.counts().values().sum::<u64>(), d.total());
                let psum: f64 = d.probabilities().map(|(_, p)| p).sum();
                prop_assert!((psum - 1.0).abs() < 1e-12);
            }
            Err(_) => prop_assert!(x.len() < span),
        }
    }
}

#[test]
fn de_bruijn_corpus_hits_every_group_pattern() {
    // De Bruijn sequence B(3, 3): every length-3 word over {0,1,2} appears once
    // cyclically; unrolling the first two symbols makes it linear.
    let mut seq = de_bruijn(3, 3);
    seq.extend_from_slice(&seq.clone()[..2]);
    let s = SampleSeries::new(seq.iter().map(|&v| v as f64).collect()).unwrap();
    let d = extract_all_patterns(&s, &EmbeddingConfig::new(3, 1).unwrap()).unwrap();
    assert_eq!(d.total(), 27);
    assert_eq!(d.len(), 13);
}

fn de_bruijn(k: usize, n: usize) -> Vec<usize> {
    fn db(t: usize, p: usize, k: usize, n: usize, a: &mut Vec<usize>, out: &mut Vec<usize>) {
        if t > n {
            if n % p == 0 {
                out.extend_from_slice(&a[1..=p]);
            }
        } else {
            a[t] = a[t - p];
            db(t + 1, p, k, n, a, out);
            for j in a[t - p] + 1..k {
                a[t] = j;
                db(t + 1, t, k, n, a, out);
            }
        }
    }
    let mut a = vec![0; k * n + 1];
    let mut out = Vec::new();
    db(1, 1, k, n, &mut a, &mut out);
    out
}
