use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use schatten::divdiff::Kernel2;
use schatten::linalg::eigh;
use schatten::opint::{q_apply, trace_second_derivative};
use schatten::verify::{check_bcl, sample_indefinite_invertible, sample_matrix, Ensemble};
use schatten::{ScalarFunction, SelfAdjointMatrix};

const DIMS: [usize; 3] = [4, 8, 16];

fn sa(n: usize, seed: u64) -> SelfAdjointMatrix {
    SelfAdjointMatrix::hermitize(&sample_matrix(Ensemble::SelfAdjoint, n, seed))
}

fn pd(n: usize, seed: u64) -> SelfAdjointMatrix {
    SelfAdjointMatrix::hermitize(&sample_matrix(Ensemble::PositiveDefinite, n, seed))
}

fn bench_eigh(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigh");
    for n in DIMS {
        let m = sa(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| eigh(black_box(m), None).unwrap()));
    }
    g.finish();
}

fn bench_q_apply(c: &mut Criterion) {
    let mut g = c.benchmark_group("q_apply");
    let kernel = Kernel2::power_div_diff(0.5);
    for n in DIMS {
        let (a, bm, x) = (pd(n, 2), pd(n, 3), sample_matrix(Ensemble::ComplexGinibre, n, 4));
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| q_apply(&kernel, black_box(&a), black_box(&bm), black_box(&x)).unwrap())
        });
    }
    g.finish();
}

fn bench_check_bcl(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_bcl");
    for n in DIMS {
        let a = sample_matrix(Ensemble::ComplexGinibre, n, 5);
        let bm = sample_matrix(Ensemble::ComplexGinibre, n, 6);
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| check_bcl(black_box(&a), black_box(&bm), 1.5).unwrap())
        });
    }
    g.finish();
}

fn bench_trace_second_derivative(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace_second_derivative");
    let f = ScalarFunction::PowerAbs(1.5);
    for n in DIMS {
        let a = sample_indefinite_invertible(n, 7, 1e-2).unwrap();
        let bm = sa(n, 8);
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| trace_second_derivative(&f, black_box(&a), black_box(&bm)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_eigh, bench_q_apply, bench_check_bcl, bench_trace_second_derivative);
criterion_main!(benches);
