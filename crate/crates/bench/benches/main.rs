use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};

use onecorr_bench::{direction_pair, grid, rng};
use onecorr_core::estimator::{estimate_correlation, exact_correlation, gap_report};
use onecorr_core::lhv::models::{BellSphereModel, DiscreteTableModel, PaperConstrainedModel};
use onecorr_core::quantum::{
    qm_correlation, sequential_measure, LocalEvolution, PureState,
};

fn bench_quantum(c: &mut Criterion) {
    let singlet = PureState::singlet();
    let (a, b) = direction_pair(1);

    c.bench_function("qm_correlation", |bench| {
        bench.iter(|| qm_correlation(black_box(&singlet), black_box(a), black_box(b)))
    });

    let ev = LocalEvolution::frozen();
    let mut r = rng(2);
    c.bench_function("sequential_measure", |bench| {
        bench.iter(|| sequential_measure(&singlet, a, 0.25, b, 0.75, &ev, &mut r))
    });
}

fn bench_estimator(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimator");
    group.measurement_time(Duration::from_secs(8));

    let (a, b) = direction_pair(3);
    let small = grid(2, 4);

    let sphere = BellSphereModel::new();
    group.bench_function("bell_sphere_10k_lambdas", |bench| {
        bench.iter(|| estimate_correlation(&sphere, a, b, &small, &small, 10_000, 7).unwrap())
    });

    let constrained = PaperConstrainedModel::balanced();
    let wide_i = grid(1024, 5);
    let wide_j = grid(1024, 6);
    group.bench_function("paper_constrained_1k_times_1k_lambdas", |bench| {
        bench.iter(|| {
            estimate_correlation(&constrained, a, b, &wide_i, &wide_j, 1000, 7).unwrap()
        })
    });

    let singlet = PureState::singlet();
    group.bench_function("gap_report_paper_constrained", |bench| {
        bench.iter(|| {
            gap_report(&singlet, &constrained, a, b, &wide_i, &wide_j, 1000, 7).unwrap()
        })
    });

    let table = DiscreteTableModel::random(8, 16, 1.0, &mut rng(8)).unwrap();
    let grid_i = grid(16, 9);
    let grid_j = grid(16, 10);
    group.bench_function("exact_enumeration_k8_n16", |bench| {
        bench.iter(|| exact_correlation(&table, a, b, &grid_i, &grid_j).unwrap())
    });

    group.finish();
}

criterion_group!(benches, bench_quantum, bench_estimator);
criterion_main!(benches);
