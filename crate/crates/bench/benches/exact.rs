use arctic_bench::gv_models;
use arctic_core::gv::{det_bareiss, lu_exact};
use arctic_core::oracle::{count_nilp, model_family};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn determinants(c: &mut Criterion) {
    let mut g = c.benchmark_group("det_bareiss");
    for n in [10usize, 20, 40] {
        for model in gv_models(n) {
            let m = model.matrix();
            g.bench_with_input(BenchmarkId::new(model.id().slug(), n), &m, |b, m| {
                b.iter(|| det_bareiss(black_box(m)).unwrap())
            });
        }
    }
    g.finish();
}

fn lu(c: &mut Criterion) {
    let mut g = c.benchmark_group("lu_exact");
    for n in [10usize, 20] {
        for model in gv_models(n) {
            let m = model.matrix();
            g.bench_with_input(BenchmarkId::new(model.id().slug(), n), &m, |b, m| {
                b.iter(|| lu_exact(black_box(m)).unwrap())
            });
        }
    }
    g.finish();
}

fn nilp(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_nilp");
    g.sample_size(10);
    for model in gv_models(3) {
        let spec = model_family(&model);
        g.bench_function(model.id().slug(), |b| b.iter(|| count_nilp(black_box(&spec)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, determinants, lu, nilp);
criterion_main!(benches);
