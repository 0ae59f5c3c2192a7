use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ordinal_tir::{compute_metrics, extract_all_patterns, EmbeddingConfig, EqualRule, MetricOptions};
use ordinal_tir_bench::epoch;
use std::hint::black_box;

fn extraction(c: &mut Criterion) {
    let s = epoch(1);
    let mut g = c.benchmark_group("extract_all_patterns");
    for m in [2, 3, 4, 5, 7] {
        for rule in [EqualRule::Occurrence, EqualRule::GroupSmallest] {
            let cfg = EmbeddingConfig::new(m, 1).unwrap().with_equal_rule(rule);
            g.bench_with_input(BenchmarkId::new(format!("{rule:?}"), m), &cfg, |b, cfg| {
                b.iter(|| extract_all_patterns(black_box(&s), cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn battery(c: &mut Criterion) {
    let s = epoch(2);
    let opts = MetricOptions::default();
    c.bench_function("compute_metrics/default_grid", |b| {
        b.iter(|| {
            for m in 2..=4 {
                for tau in 1..=4 {
                    let cfg = EmbeddingConfig::new(m, tau).unwrap();
                    black_box(compute_metrics(black_box(&s), &cfg, &opts).unwrap());
                }
            }
        })
    });
}

criterion_group!(benches, extraction, battery);
criterion_main!(benches);
