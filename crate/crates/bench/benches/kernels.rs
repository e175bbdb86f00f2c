use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mstiff::diophantine::{dims_for_m4_up_to, dims_for_m5_up_to};
use mstiff::exact::newton::newton_polygon;
use mstiff::search::{candidate_set, classify_dimension, Budget, Parity};
use mstiff::stiffness::{integer_form, screen_coefficients, stiff_exists, bd_coefficients};
use mstiff::BdParams;
use mstiff_bench::{CELLS, DIMS};

fn screen(c: &mut Criterion) {
    let mut g = c.benchmark_group("screen");
    for &(m, d) in CELLS {
        let p = BdParams::new(m, d).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("{m}x{d}")), &p, |b, p| b.iter(|| screen_coefficients(black_box(p))));
    }
    g.finish();
}

fn decide(c: &mut Criterion) {
    let mut g = c.benchmark_group("stiff_exists");
    for &(m, d) in CELLS {
        g.bench_function(format!("{m}x{d}"), |b| b.iter(|| stiff_exists(black_box(m), black_box(d)).unwrap()));
    }
    g.finish();
}

fn candidates(c: &mut Criterion) {
    let mut g = c.benchmark_group("candidate_set");
    g.sample_size(10);
    for k in [4u64, 5, 7] {
        g.bench_function(format!("k{k}-even"), |b| b.iter(|| candidate_set(black_box(k), Parity::Even).unwrap()));
    }
    g.finish();
}

fn pell_streams(c: &mut Criterion) {
    let mut g = c.benchmark_group("pell");
    g.bench_function("m4-1e30", |b| b.iter(|| dims_for_m4_up_to(black_box(10u128.pow(30))).unwrap()));
    g.bench_function("m5-1e30", |b| b.iter(|| dims_for_m5_up_to(black_box(10u128.pow(30))).unwrap()));
    g.finish();
}

fn newton(c: &mut Criterion) {
    let p = BdParams::new(6, 6).unwrap();
    let coeffs = integer_form(&p, &bd_coefficients(&p)).unwrap();
    c.bench_function("newton_polygon/6x6", |b| b.iter(|| newton_polygon(black_box(&coeffs), 2).unwrap()));
}

fn dimension(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify_dimension");
    g.sample_size(10);
    for &d in DIMS {
        g.bench_function(d.to_string(), |b| b.iter(|| classify_dimension(black_box(d), &Budget::unlimited()).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, screen, decide, candidates, pell_streams, newton, dimension);
criterion_main!(benches);
