use arctic_bench::{mid_z, setups};
use arctic_core::models::profile::DEFAULT_CROSSOVER;
use arctic_core::tangent::{default_grid, envelope, finite_n_saddle, tangent_family};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn saddles(c: &mut Criterion) {
    let mut g = c.benchmark_group("finite_n_saddle");
    g.sample_size(10);
    for s in setups() {
        let z = mid_z(s.model);
        for n in [256usize, 1024] {
            g.bench_with_input(BenchmarkId::new(s.model.slug(), n), &n, |b, &n| {
                b.iter(|| finite_n_saddle(&s, black_box(n), z, DEFAULT_CROSSOVER).unwrap())
            });
        }
    }
    g.finish();
}

fn envelopes(c: &mut Criterion) {
    let mut g = c.benchmark_group("tangent_envelope");
    for s in setups() {
        let zs = default_grid(s.model, 200).points();
        g.bench_function(s.model.slug(), |b| {
            b.iter(|| envelope(&tangent_family(&s, black_box(&zs)).unwrap()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, saddles, envelopes);
criterion_main!(benches);
