use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sdf_bench::paper_sample;
use sdf_core::experiments::reference::l1_to_quintic_limit;
use sdf_core::experiments::{run_scenario, EstimatorSpec, Parent, ScenarioConfig, SizeRule};
use sdf_core::sampling::{sample_coupled, sample_multinomial};
use sdf_core::{
    grouped_estimator, kernel_estimator, l1_distance, natural_estimator, structural_df, GroupingScheme, Kernel,
    KernelSpec, SeededRng,
};

fn estimators(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimators");
    for m in [1_000usize, 10_000] {
        let n = 2 * m as u64;
        let (_, counts) = paper_sample(m, n, 1);
        let scheme = GroupingScheme::equal_size(m, 50).unwrap();
        let spec = KernelSpec::new(Kernel::Box, 50).unwrap();
        group.bench_with_input(BenchmarkId::new("natural", m), &counts, |b, c| {
            b.iter(|| natural_estimator(black_box(c), n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("grouped_k50", m), &counts, |b, c| {
            b.iter(|| grouped_estimator(black_box(c), n, &scheme).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("kernel_box_k50", m), &counts, |b, c| {
            b.iter(|| kernel_estimator(black_box(c), n, &spec).unwrap())
        });
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let (p, counts) = paper_sample(1_000, 2_000, 2);
    let fm = structural_df(&p);
    let natural = natural_estimator(&counts, 2_000).unwrap();
    c.bench_function("l1_to_F_M", |b| b.iter(|| l1_distance(black_box(&natural), &fm)));
    c.bench_function("l1_to_quintic_limit", |b| b.iter(|| l1_to_quintic_limit(black_box(&natural))));
}

fn sampling(c: &mut Criterion) {
    let (p, _) = paper_sample(1_000, 2_000, 3);
    let mut rng = SeededRng::new(4);
    c.bench_function("multinomial_m1000_n2000", |b| b.iter(|| sample_multinomial(&p, 2_000, &mut rng)));
    c.bench_function("coupled_m1000_n2000", |b| b.iter(|| sample_coupled(&p, 2_000, &mut rng)));
}

fn scenario(c: &mut Criterion) {
    let mut cfg = ScenarioConfig::new(1_000, 2_000, Parent::PaperQuintic);
    cfg.replicates = 20;
    cfg.estimators = vec![
        EstimatorSpec::Natural,
        EstimatorSpec::Grouped { size: Some(SizeRule::Fixed(50)), breaks: None },
        EstimatorSpec::Kernel { kernel: Kernel::Box, bandwidth: SizeRule::Fixed(50) },
    ];
    let mut group = c.benchmark_group("scenario");
    group.sample_size(10);
    group.bench_function("paper_20_replicates", |b| b.iter(|| run_scenario(black_box(&cfg)).unwrap()));
    group.finish();
}

criterion_group!(benches, estimators, distances, sampling, scenario);
criterion_main!(benches);
