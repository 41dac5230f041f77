use std::hint::black_box;

use cantor_evt::{cdf, cdf_exact, nu, psi, quantile, DEFAULT_DEPTH};
use cantor_evt_bench::bench_params;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::BigRational;

fn marginal(c: &mut Criterion) {
    let xs: Vec<f64> = (0..256).map(|i| (i as f64 + 0.5) / 256.0).collect();
    let mut g = c.benchmark_group("marginal");
    for (name, pr) in bench_params() {
        g.bench_with_input(BenchmarkId::new("cdf_256_points", name), &pr, |b, pr| {
            b.iter(|| {
                xs.iter()
                    .map(|&x| cdf(pr, x, DEFAULT_DEPTH).unwrap().value)
                    .sum::<f64>()
            })
        });
        let xe = BigRational::new(7.into(), 19.into());
        g.bench_with_input(BenchmarkId::new("cdf_exact", name), &pr, |b, pr| {
            b.iter(|| cdf_exact(pr, black_box(&xe), DEFAULT_DEPTH).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("quantile", name), &pr, |b, pr| {
            b.iter(|| quantile(pr, black_box(0.3141), DEFAULT_DEPTH).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("nu", name), &pr, |b, pr| {
            b.iter(|| nu(pr, black_box(-0.37), DEFAULT_DEPTH))
        });
        g.bench_with_input(BenchmarkId::new("psi", name), &pr, |b, pr| {
            b.iter(|| psi(pr, black_box(-1.7), DEFAULT_DEPTH).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, marginal);
criterion_main!(benches);
