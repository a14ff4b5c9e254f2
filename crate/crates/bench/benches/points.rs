use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use medqmc_bench::{binary, sobol, SEED, W};
use medqmc_core::generate_points;
use medqmc_core::poly_lattice::{plr_gen_matrices, plr_points, sample_plr};
use medqmc_core::scramble::draw_scrambled_net;

fn net_points(c: &mut Criterion) {
    let mut g = c.benchmark_group("sobol_points");
    for m in [10, 14] {
        let base = sobol(8, m);
        g.bench_with_input(BenchmarkId::from_parameter(m), &base, |b, base| {
            b.iter(|| generate_points(black_box(base)).unwrap())
        });
    }
    g.finish();
}

fn scramble_draw(c: &mut Criterion) {
    let base = sobol(8, 12);
    c.bench_function("scramble_draw_s8_m12", |b| {
        let mut i = 0u64;
        b.iter(|| {
            i += 1;
            draw_scrambled_net(black_box(&base), W, SEED, i).unwrap()
        })
    });
}

fn lattice_points(c: &mut Criterion) {
    let spec = sample_plr(binary(), 12, 8, W, SEED, 0).unwrap();
    let mut g = c.benchmark_group("plr_points_s8_m12");
    g.sample_size(10);
    g.bench_function("direct", |b| b.iter(|| plr_points(black_box(&spec)).unwrap()));
    g.bench_function("matrices", |b| {
        b.iter(|| generate_points(&plr_gen_matrices(black_box(&spec)).unwrap()).unwrap())
    });
    g.finish();
    c.bench_function("sample_plr_s8_m12", |b| {
        let mut i = 0u64;
        b.iter(|| {
            i += 1;
            sample_plr(binary(), 12, 8, W, SEED, i).unwrap()
        })
    });
}

criterion_group!(benches, net_points, scramble_draw, lattice_points);
criterion_main!(benches);
