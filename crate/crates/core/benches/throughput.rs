//! Criterion suite comparing the sequential trial loop against the rayon
//! data-parallel path on the workloads that dominate experiment runtime.
//!
//! A `workers = 1` run always takes the plain sequential code path; with the
//! default `parallel` feature the same batch is also timed on rayon pools of
//! growing size. Building with `--no-default-features` removes rayon
//! entirely and benches just the fallback, under the same benchmark ids.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rasp_core::distributions::DistributionSpec;
use rasp_core::experiments::{
    estimate_expectation, run_trials, ExperimentConfig, Method, SizePair,
};
use rasp_core::matrix::Objective;
use rasp_core::rng::{substream, DOMAIN_TRIAL};
use rasp_core::solver::solve;

fn worker_counts() -> Vec<usize> {
    #[cfg(feature = "parallel")]
    {
        vec![1, 2, 4]
    }
    #[cfg(not(feature = "parallel"))]
    {
        vec![1]
    }
}

fn bench_solver_trials(c: &mut Criterion) {
    let spec = DistributionSpec::exponential(1.0).unwrap();
    let mut group = c.benchmark_group("solver_trials_60x90");
    group.sample_size(10);
    for workers in worker_counts() {
        group.bench_with_input(
            BenchmarkId::from_parameter(workers),
            &workers,
            |b, &workers| {
                b.iter(|| {
                    let values = run_trials(workers, 64, |trial| {
                        let mut rng = substream(17, DOMAIN_TRIAL, 0, trial);
                        let matrix =
                            rasp_core::distributions::sample_matrix(&spec, 60, 90, &mut rng)
                                .unwrap();
                        solve(&matrix, Objective::Max).unwrap().0.value
                    });
                    black_box(values)
                })
            },
        );
    }
    group.finish();
}

fn bench_sandwich_trials(c: &mut Criterion) {
    let spec = DistributionSpec::exponential(1.0).unwrap();
    let mut group = c.benchmark_group("sandwich_trials_800x1600");
    group.sample_size(10);
    for workers in worker_counts() {
        group.bench_with_input(
            BenchmarkId::from_parameter(workers),
            &workers,
            |b, &workers| {
                b.iter(|| {
                    let values = run_trials(workers, 256, |trial| {
                        let mut rng = substream(18, DOMAIN_TRIAL, 0, trial);
                        rasp_core::greedy::sandwich_sample(&spec, 800, 1600, &mut rng).unwrap()
                    });
                    black_box(values)
                })
            },
        );
    }
    group.finish();
}

fn bench_expectation_report(c: &mut Criterion) {
    let spec = DistributionSpec::exponential(1.0).unwrap();
    let mut group = c.benchmark_group("expectation_40x60");
    group.sample_size(10);
    for workers in worker_counts() {
        let config = ExperimentConfig {
            spec,
            schedule: vec![SizePair { n: 40, m: 60 }],
            trials: 200,
            seed: 99,
            method: Method::Solver,
            workers,
        };
        group.bench_with_input(
            BenchmarkId::from_parameter(workers),
            &config,
            |b, config| b.iter(|| black_box(estimate_expectation(config).unwrap())),
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_solver_trials,
    bench_sandwich_trials,
    bench_expectation_report
);
criterion_main!(benches);
