use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use sqzphase::detection::phase_error;
use sqzphase::fock::{self, TwoModeEvolver};
use sqzphase::sensitivity::{linear_grid, peak_and_width, sweep, table1};
use sqzphase::{DetectionScheme, PhotonBudget};
use sqzphase_bench::{r0_threshold_setup, two_arm_fixture};

fn analytic(c: &mut Criterion) {
    let cfg = two_arm_fixture();
    c.bench_function("phase_error/threshold", |b| {
        b.iter(|| phase_error(black_box(&cfg), DetectionScheme::Threshold).unwrap())
    });
    let grid = linear_grid(-0.7, 0.7, 101).unwrap();
    c.bench_function("sweep/101_points", |b| {
        b.iter(|| sweep(black_box(&cfg), DetectionScheme::Threshold, &grid).unwrap())
    });
    let setup = r0_threshold_setup(10.0);
    c.bench_function("peak_and_width/two_r0_threshold", |b| b.iter(|| peak_and_width(black_box(&setup)).unwrap()));
    let mut group = c.benchmark_group("table1");
    group.sample_size(10);
    group.bench_function("n10", |b| b.iter(|| table1(PhotonBudget::new(black_box(10.0)).unwrap()).unwrap()));
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let cfg = two_arm_fixture();
    let mut group = c.benchmark_group("fock");
    group.sample_size(10);
    group.bench_function("evolver_build/d40", |b| b.iter(|| TwoModeEvolver::new(black_box(40)).unwrap()));
    let evolver = TwoModeEvolver::new(40).unwrap();
    let input = fock::prepare(&cfg, 40).unwrap();
    group.bench_function("evolve/d40", |b| b.iter(|| evolver.evolve(black_box(&input), 0.35).unwrap()));
    group.bench_function("prepare/single_d160", |b| {
        let single = sqzphase::InterferometerConfig::single_arm(3.0, 1.0, 0.0).unwrap();
        b.iter(|| fock::prepare(black_box(&single), 160).unwrap())
    });
    group.finish();
}

criterion_group!(benches, analytic, oracle);
criterion_main!(benches);
