use std::f64::consts::{FRAC_PI_2, PI};
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rfsq_core::scan::{figure_axes, scan_with_threads};
use rfsq_core::{
    full_report, minimize_variance, relax_to_steady, steady_state, AtomFieldParams, BlochState,
    SearchBox,
};

fn point() -> AtomFieldParams {
    AtomFieldParams::new(0.125, PI, 21.65, 12.5)
}

fn single_point(c: &mut Criterion) {
    let p = point();
    c.bench_function("steady_state", |b| {
        b.iter(|| steady_state(black_box(&p)).unwrap())
    });
    c.bench_function("full_report", |b| {
        b.iter(|| full_report(black_box(&p)).unwrap())
    });
    let slow = AtomFieldParams::new(0.1, 1.0, 2.0, -1.0);
    c.bench_function("relax_to_steady", |b| {
        b.iter(|| relax_to_steady(black_box(&slow), BlochState::GROUND, 1e-10).unwrap())
    });
}

fn grids(c: &mut Criterion) {
    let spec = figure_axes::fig2();
    let mut group = c.benchmark_group("scan_fig2_grid");
    group.sample_size(20);
    group.bench_function("threads=1", |b| {
        b.iter(|| scan_with_threads(black_box(&spec), 1).unwrap())
    });
    group.bench_function("threads=auto", |b| {
        b.iter(|| scan_with_threads(black_box(&spec), 0).unwrap())
    });
    group.finish();
}

fn optimizer(c: &mut Criterion) {
    let bounds = SearchBox::new((0.0, 4.0), (-2.0, 4.0));
    let mut group = c.benchmark_group("minimize_variance");
    group.sample_size(20);
    group.bench_function("n=0.125,phi=pi/2", |b| {
        b.iter(|| minimize_variance(black_box(0.125), FRAC_PI_2, bounds).unwrap())
    });
    group.finish();
}

criterion_group!(benches, single_point, grids, optimizer);
criterion_main!(benches);
