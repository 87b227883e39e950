use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use triosc::analytic;
use triosc::evolve::{analytic_series, coherent_series, poisson_kmax, poisson_weights};
use triosc::spectral::effective_frequencies;
use triosc_bench::{grid, reference_params};

fn bench_analytic(c: &mut Criterion) {
    let params = reference_params(10.0, 4.0);
    let spectral = effective_frequencies(&params);
    let times = grid(30.0, 1500);

    c.bench_function("analytic point", |b| {
        b.iter(|| analytic::mean_occupations(black_box(&params), &spectral, black_box(7.3)))
    });
    c.bench_function("analytic series 1500pt", |b| {
        b.iter(|| analytic_series(black_box(&params), black_box(&times)))
    });
}

fn bench_coherent_oracle(c: &mut Criterion) {
    let times = grid(30.0, 1500);
    let mut group = c.benchmark_group("coherent series 1500pt");
    for gamma in [10.0, 100.0] {
        let params = reference_params(gamma, 4.0);
        group.bench_function(format!("gamma {gamma}"), |b| {
            b.iter(|| coherent_series(black_box(&params), black_box(&times), 1e-12).unwrap())
        });
    }
    group.finish();
}

fn bench_poisson(c: &mut Criterion) {
    c.bench_function("poisson_kmax mean 3000", |b| {
        b.iter(|| poisson_kmax(black_box(3000.0), 1e-12).unwrap())
    });
    c.bench_function("poisson_weights mean 300", |b| {
        b.iter(|| poisson_weights(black_box(300.0), 450))
    });
}

criterion_group!(benches, bench_analytic, bench_coherent_oracle, bench_poisson);
criterion_main!(benches);
