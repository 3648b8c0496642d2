use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cyclic_lattice::facets::{brute_force_facets, enumerate_facets};
use cyclic_lattice::lattice::{enumerate_points, sample_lattice_point, DEFAULT_SAMPLE_RETRIES};
use cyclic_lattice::normality::{full_decompose, idp_check};
use cyclic_lattice::veryample::very_ample_obstruction;
use cyclic_lattice::{CyclicPolytope, DEFAULT_BUDGET};

fn poly(d: usize, taus: &[i64]) -> CyclicPolytope {
    CyclicPolytope::from_i64s(d, taus).unwrap()
}

fn facets(c: &mut Criterion) {
    let p = poly(5, &[0, 1, 3, 4, 7, 9, 12, 13]);
    let mut g = c.benchmark_group("facets");
    g.bench_function("gale", |b| b.iter(|| enumerate_facets(black_box(&p))));
    g.bench_function("brute_force", |b| b.iter(|| brute_force_facets(black_box(&p)).unwrap()));
    g.finish();
}

fn points(c: &mut Criterion) {
    let p = poly(4, &[0, 1, 3, 5, 6]);
    let mut g = c.benchmark_group("enumerate_points");
    for m in 1..=3u32 {
        g.bench_with_input(BenchmarkId::new("c4_01356", m), &m, |b, &m| {
            b.iter(|| enumerate_points(black_box(&p), m, DEFAULT_BUDGET).unwrap())
        });
    }
    g.finish();
}

fn normality(c: &mut Criterion) {
    let mut g = c.benchmark_group("idp_check");
    g.sample_size(10);
    for (name, d, taus) in [
        ("c3_0123", 3, &[0, 1, 2, 3][..]),
        ("c4_01356", 4, &[0, 1, 3, 5, 6][..]),
        ("c4_02358", 4, &[0, 2, 3, 5, 8][..]),
    ] {
        let p = poly(d, taus);
        g.bench_function(name, |b| b.iter(|| idp_check(black_box(&p), None, DEFAULT_BUDGET).unwrap()));
    }
    g.finish();
}

fn decomposition(c: &mut Criterion) {
    let p = poly(4, &[0, 15, 30, 45, 60]);
    let alpha = sample_lattice_point(&p, 4, 1, DEFAULT_SAMPLE_RETRIES).unwrap();
    c.bench_function("full_decompose/c4_gap15_m4", |b| {
        b.iter(|| full_decompose(black_box(&p), black_box(&alpha), false).unwrap())
    });
}

fn witness(c: &mut Criterion) {
    let p = poly(4, &[0, 2, 3, 5, 8]);
    let mut g = c.benchmark_group("very_ample_obstruction");
    g.sample_size(10);
    g.bench_function("c4_02358", |b| b.iter(|| very_ample_obstruction(black_box(&p), 3, DEFAULT_BUDGET).unwrap()));
    g.finish();
}

criterion_group!(benches, facets, points, normality, decomposition, witness);
criterion_main!(benches);
