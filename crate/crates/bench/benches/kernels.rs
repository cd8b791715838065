use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pps_bench::fixture;
use pps_core::linalg::eig_hermitian;
use pps_core::relations::{otoc_bounds, pps_ur};
use pps_core::search::{optimize_postselection, Objective};
use pps_core::stats::std_pps;
use pps_core::{
    c64, make_qubit_state, pauli, CMatrix, Observable, PureState, SearchConfig, UnitaryOp,
};

fn eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig_hermitian");
    for dim in [2, 4, 8] {
        let (a, ..) = fixture(dim, 1);
        group.bench_with_input(BenchmarkId::from_parameter(dim), a.matrix(), |b, m| {
            b.iter(|| eig_hermitian(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn deviations(c: &mut Criterion) {
    let mut group = c.benchmark_group("pps");
    for dim in [2, 4, 8] {
        let (a, b, psi, phi) = fixture(dim, 2);
        group.bench_with_input(BenchmarkId::new("std_pps", dim), &dim, |bench, _| {
            bench.iter(|| std_pps(black_box(&a), &psi, &phi).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pps_ur", dim), &dim, |bench, _| {
            bench.iter(|| pps_ur(black_box(&a), &b, &psi, &phi, true).unwrap())
        });
    }
    group.finish();
}

fn otoc_sweep(c: &mut Criterion) {
    let v = UnitaryOp::new(pauli::z()).unwrap();
    let s = FRAC_1_SQRT_2;
    let w = UnitaryOp::new(
        CMatrix::from_rows(vec![
            vec![c64(s, 0.0), c64(s, 0.0)],
            vec![c64(0.0, -s), c64(0.0, s)],
        ])
        .unwrap(),
    )
    .unwrap();
    let phis = [
        make_qubit_state(PI, FRAC_PI_2),
        make_qubit_state(FRAC_PI_2, FRAC_PI_2),
    ];
    let grid: Vec<f64> = (0..721)
        .map(|k| -PI + 2.0 * PI * k as f64 / 720.0)
        .collect();
    c.bench_function("otoc_bounds_721_rows", |b| {
        b.iter(|| {
            grid.iter()
                .map(|&t| {
                    otoc_bounds(&v, &w, &make_qubit_state(t, PI / 11.0).projector(), &phis)
                        .unwrap()
                        .lhs
                })
                .sum::<f64>()
        })
    });
}

fn search(c: &mut Criterion) {
    let objective = Objective::intelligent_residual_min(
        Observable::pauli_x(),
        Observable::pauli_y(),
        PureState::basis(2, 0),
    )
    .unwrap();
    let config = SearchConfig {
        restarts: 4,
        ..SearchConfig::default()
    };
    c.bench_function("intelligent_search_qubit", |b| {
        b.iter(|| optimize_postselection(black_box(&objective), 2, &config).unwrap())
    });
}

criterion_group!(benches, eigen, deviations, otoc_sweep, search);
criterion_main!(benches);
