use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sturmian_core::greens1d::{g_block, Variant};
use sturmian_core::greens2d::{convolve, ConvolutionOptions};
use sturmian_core::weight::{gram_matrix, QuadratureConfig};
use sturmian_core::{p_sequence, q_sequence, PhysicalParams};

fn sequences(c: &mut Criterion) {
    let p = PhysicalParams::new(1.0, 2.0, 0.5, 1.0).unwrap();
    let mut group = c.benchmark_group("sequences");
    for n in [50, 200] {
        group.bench_with_input(BenchmarkId::new("p", n), &n, |b, &n| b.iter(|| p_sequence(black_box(&p), n).unwrap()));
        group.bench_with_input(BenchmarkId::new("q", n), &n, |b, &n| b.iter(|| q_sequence(black_box(&p), n).unwrap()));
    }
    // large |t| takes the integral route for q
    let far = p.with_t(200.0);
    group.bench_function("q/far", |b| b.iter(|| q_sequence(black_box(&far), 50).unwrap()));
    group.finish();
}

fn blocks(c: &mut Criterion) {
    let p = PhysicalParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
    let cfg = QuadratureConfig::default();
    c.bench_function("greens1d/xi/40", |b| b.iter(|| g_block(black_box(&p), 40, Variant::Xi).unwrap()));
    c.bench_function("gram/8", |b| b.iter(|| gram_matrix(black_box(&p), 8, &cfg).unwrap()));
    let mut group = c.benchmark_group("greens2d");
    group.sample_size(10);
    group.bench_function("c0/3", |b| b.iter(|| convolve(black_box(&p), 3, &cfg, &ConvolutionOptions::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, sequences, blocks);
criterion_main!(benches);
