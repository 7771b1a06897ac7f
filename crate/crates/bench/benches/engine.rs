use criterion::{black_box, criterion_group, criterion_main, Criterion};

use wellbeing::dynamics::quadrature::adaptive_simpson;
use wellbeing::{classify, cross_validate, ratio_analysis, StepControl, Tolerance};
use wellbeing_bench::{grid, high_growth};

fn bench_classify(c: &mut Criterion) {
    let scenarios = grid(32);
    c.bench_function("classify_grid_1024", |b| {
        b.iter(|| {
            for p in &scenarios {
                black_box(classify(black_box(p), Tolerance::DEFAULT));
            }
        })
    });
    let p = high_growth();
    c.bench_function("ratio_analysis", |b| b.iter(|| ratio_analysis(black_box(&p))));
}

fn bench_dynamics(c: &mut Criterion) {
    let p = high_growth();
    let mut group = c.benchmark_group("integrate_horizon_50");
    group.sample_size(20);
    group.bench_function("rk4_h0.01", |b| {
        b.iter(|| cross_validate(black_box(&p), 50.0, StepControl::fixed(0.01)).unwrap())
    });
    group.bench_function("dopri_tol1e-8", |b| {
        b.iter(|| cross_validate(black_box(&p), 50.0, StepControl::adaptive(1e-8)).unwrap())
    });
    group.finish();

    c.bench_function("adaptive_simpson_exp", |b| {
        b.iter(|| adaptive_simpson(f64::exp, 0.0, black_box(1.0), 1e-10).unwrap())
    });
}

criterion_group!(benches, bench_classify, bench_dynamics);
criterion_main!(benches);
