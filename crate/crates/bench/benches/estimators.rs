use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use medqmc_bench::{median_plr, median_sobol, product, sobol};
use medqmc_core::generate_points;
use medqmc_core::median_qmc::{median, median_estimate, qmc_mean};

fn mean(c: &mut Criterion) {
    let p = generate_points(&sobol(8, 14)).unwrap();
    c.bench_function("qmc_mean_s8_m14", |b| b.iter(|| qmc_mean(black_box(&p), &product).unwrap()));
}

fn medians(c: &mut Criterion) {
    let mut g = c.benchmark_group("median_estimate_s4_m12");
    g.sample_size(20);
    for r in [1u32, 15] {
        let rule = median_sobol(4, 12, r);
        g.bench_with_input(BenchmarkId::new("median-sobol", r), &rule, |b, rule| {
            b.iter(|| median_estimate(rule, &product).unwrap())
        });
        let rule = median_plr(4, 12, r);
        g.bench_with_input(BenchmarkId::new("median-plr", r), &rule, |b, rule| {
            b.iter(|| median_estimate(rule, &product).unwrap())
        });
    }
    g.finish();
    let v: Vec<f64> = (0..63).map(|i| ((i * 37) % 63) as f64).collect();
    c.bench_function("median_of_63", |b| b.iter(|| median(black_box(&v)).unwrap()));
}

criterion_group!(benches, mean, medians);
criterion_main!(benches);
