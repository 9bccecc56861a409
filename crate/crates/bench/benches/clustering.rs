use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use facetnav_core::facets::agglomerative_entity_clustering;
use facetnav_core::ClusteringConfig;
use std::hint::black_box;

fn agglomerative(c: &mut Criterion) {
    let config = ClusteringConfig::default();
    let mut group = c.benchmark_group("agglomerative");
    group.sample_size(20);
    for n in [100, 400, 1000] {
        let (wd, cd) = facetnav_bench::entity_workload(11, n, 0.05);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(wd, cd), |b, (wd, cd)| {
            b.iter(|| agglomerative_entity_clustering(black_box(wd), black_box(cd), &config))
        });
    }
    group.finish();
}

fn build(c: &mut Criterion) {
    c.bench_function("build_topic_25_docs", |b| b.iter(|| facetnav_bench::topic(3, 25, 30, 100)));
}

criterion_group!(benches, agglomerative, build);
criterion_main!(benches);
