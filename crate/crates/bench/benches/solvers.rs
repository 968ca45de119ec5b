use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mds_core::{
    construct, construct_from_maps, forward, generate_er, prune, run_ig, solve_exact, Budget, GcnWeights, Heuristic,
    IgConfig,
};

fn sparse(n: usize, seed: u64) -> mds_core::Graph {
    generate_er(n, 5.0 / (n - 1) as f64, seed).unwrap()
}

fn bench_greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_prune");
    for n in [200, 1000, 5000] {
        let g = sparse(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| prune(g, &construct(g, Heuristic::Greedy)).unwrap())
        });
    }
    group.finish();
}

fn bench_exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    for n in [40, 70, 100] {
        let g = sparse(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| solve_exact(g, Budget::unlimited()).unwrap().gamma)
        });
    }
    group.finish();
}

fn bench_gcn(c: &mut Criterion) {
    let weights = GcnWeights::random(&[32; 21], 7).unwrap();
    let mut group = c.benchmark_group("gcn_forward_20x32");
    for n in [200, 1000] {
        let g = sparse(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| forward(g, &weights)));
    }
    let g = sparse(200, 3);
    let maps = forward(&g, &weights);
    group.bench_function("construct_from_32_maps/200", |b| {
        b.iter(|| construct_from_maps(&g, black_box(&maps)).unwrap())
    });
    group.finish();
}

fn bench_ig(c: &mut Criterion) {
    let g = sparse(200, 4);
    let cfg = IgConfig {
        delta_max: 50,
        time_limit: Duration::from_secs(5),
        ..IgConfig::default()
    };
    let mut group = c.benchmark_group("iterated_greedy");
    group.sample_size(10);
    group.bench_function("classic/200", |b| b.iter(|| run_ig(&g, &cfg, None).unwrap().0.len()));
    group.finish();
}

criterion_group!(benches, bench_greedy, bench_exact, bench_gcn, bench_ig);
criterion_main!(benches);
