//! Extreme-value analytics against independent oracles: the Legendre
//! transform versus exhaustive search, log-gamma versus its Taylor series,
//! convexity and monotonicity of the tabulated rate function, max-stability
//! of the three limit laws, and the rectangularity correction along a
//! doubling schedule.

mod common;

use rasp_core::distributions::DistributionSpec;
use rasp_core::evt::{
    epsilon, epsilon_schedule, frechet_sample, gumbel_cdf, gumbel_cgf, gumbel_rate, gumbel_sample,
    log_gamma, rate_function_table, weibull_sample, EULER_GAMMA,
};
use rasp_core::rng::{substream, DOMAIN_TRIAL};
use rasp_core::stats::{ks_statistic, SummaryStats};

#[test]
fn rate_function_matches_grid_search_oracle() {
    let mut r = -3.0;
    while r <= 3.0 + 1e-12 {
        let newton = gumbel_rate(r).unwrap().lambda_star;
        let oracle = common::rate_grid_oracle(r);
        assert!(
            (newton - oracle).abs() <= 1e-6,
            "rate mismatch at r={r}: newton {newton} vs grid {oracle}"
        );
        r += 0.05;
    }
}

#[test]
fn rate_examples_against_oracle() {
    for &r in &[0.5, -0.5] {
        let point = gumbel_rate(r).unwrap();
        assert!((point.lambda_star - common::rate_grid_oracle(r)).abs() <= 1e-6);
        assert!(point.lambda_star > 0.0);
        assert_eq!(point.t_star > 0.0, r > 0.0);
    }
}

#[test]
fn cgf_is_convex_with_flat_origin() {
    // Midpoint convexity on a grid in (-5, 0.999).
    let cgf = |t: f64| gumbel_cgf(t).finite().unwrap();
    let grid: Vec<f64> = (0..500)
        .map(|i| -5.0 + i as f64 * (5.999 / 500.0))
        .collect();
    for w in grid.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        assert!(
            cgf(b) <= 0.5 * (cgf(a) + cgf(c)) + 1e-9,
            "convexity violated near t={b}"
        );
    }
    assert_eq!(cgf(0.0), 0.0);
    // Flat slope at the origin by symmetric difference.
    let h = 1e-5;
    let slope = (cgf(h) - cgf(-h)) / (2.0 * h);
    assert!(slope.abs() <= 1e-6, "slope at 0 is {slope}");
}

#[test]
fn rate_table_invariants() {
    let table = rate_function_table(-2.0, 2.0, 0.1).unwrap();
    let zero = table.grid_r.iter().position(|&r| r == 0.0).unwrap();
    assert_eq!(table.lambda_star[zero], 0.0);
    for (i, &l) in table.lambda_star.iter().enumerate() {
        assert!(l >= 0.0, "negative rate at index {i}");
        assert!(table.maximizer_t[i] < 1.0);
    }
    // Convexity along the grid.
    for i in 1..table.grid_r.len() - 1 {
        let mid = table.lambda_star[i];
        let avg = 0.5 * (table.lambda_star[i - 1] + table.lambda_star[i + 1]);
        assert!(
            mid <= avg + 1e-9,
            "rate not convex at r={}",
            table.grid_r[i]
        );
    }
    // Maximizer strictly increasing in r.
    for w in table.maximizer_t.windows(2) {
        assert!(w[0] < w[1]);
    }
}

#[test]
fn log_gamma_matches_series_oracle() {
    // 50 terms of the series resolve |x - 1| <= 0.5 to machine precision.
    for &x in &[0.6, 0.8, 1.2, 1.4, 1.5] {
        let lanczos = log_gamma(x).unwrap();
        let series = common::log_gamma_series_oracle(x);
        assert!(
            (lanczos - series).abs() <= 1e-13,
            "log-gamma mismatch at {x}: {lanczos} vs {series}"
        );
    }
    // The CGF at 0.4 runs through Gamma(0.6).
    let target = common::log_gamma_series_oracle(0.6) - 0.4 * EULER_GAMMA;
    let cgf = gumbel_cgf(0.4).finite().unwrap();
    assert!((cgf - target).abs() <= 1e-13);
    assert!((cgf - 0.16737).abs() < 5e-5);
}

#[test]
fn gumbel_sampler_mean_is_euler_gamma() {
    let draws = 1_000_000usize;
    let mut rng = substream(314, DOMAIN_TRIAL, 0, 0);
    let values: Vec<f64> = (0..draws).map(|_| gumbel_sample(&mut rng)).collect();
    let stats = SummaryStats::from_values(&values);
    assert!(
        (stats.mean - EULER_GAMMA).abs() <= 4.0 * stats.std_error,
        "mean {} vs gamma (se {})",
        stats.mean,
        stats.std_error
    );
}

fn ks_of_replicated_max(sample: impl FnMut(u64) -> f64, cdf: impl Fn(f64) -> f64) -> f64 {
    let reps = 100_000u64;
    let mut values: Vec<f64> = (0..reps).map(sample).collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ks_statistic(&values, cdf)
}

#[test]
fn gumbel_max_stability() {
    // Max of 64 draws minus ln 64 is again standard Gumbel.
    let shift = 64.0_f64.ln();
    let ks = ks_of_replicated_max(
        |rep| {
            let mut rng = substream(41, DOMAIN_TRIAL, 1, rep);
            let max = (0..64)
                .map(|_| gumbel_sample(&mut rng))
                .fold(f64::NEG_INFINITY, f64::max);
            max - shift
        },
        gumbel_cdf,
    );
    assert!(ks < 0.01, "gumbel max-stability KS = {ks}");
}

#[test]
fn frechet_max_stability() {
    let alpha = 2.0;
    let scale = 64.0_f64.powf(1.0 / alpha);
    let ks = ks_of_replicated_max(
        |rep| {
            let mut rng = substream(42, DOMAIN_TRIAL, 2, rep);
            let max = (0..64)
                .map(|_| frechet_sample(alpha, &mut rng).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            max / scale
        },
        |r| rasp_core::evt::frechet_cdf(alpha, r).unwrap(),
    );
    assert!(ks < 0.01, "frechet max-stability KS = {ks}");
}

#[test]
fn weibull_max_stability() {
    let alpha = 1.5;
    let scale = 64.0_f64.powf(-1.0 / alpha);
    let ks = ks_of_replicated_max(
        |rep| {
            let mut rng = substream(43, DOMAIN_TRIAL, 3, rep);
            let max = (0..64)
                .map(|_| weibull_sample(alpha, &mut rng).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            max / scale
        },
        |r| rasp_core::evt::weibull_cdf(alpha, r).unwrap(),
    );
    assert!(ks < 0.01, "weibull max-stability KS = {ks}");
}

#[test]
fn epsilon_square_schedule_approaches_one() {
    // eps(n, n) = ln n - ln(n!)/n for unit exponentials, creeping up to 1.
    let spec = DistributionSpec::exponential(1.0).unwrap();
    let schedule: Vec<(u64, u64)> = (1..=12).map(|j| (1u64 << j, 1u64 << j)).collect();
    let report = epsilon_schedule(&spec, &schedule).unwrap();
    let seq = report.sequence_values.unwrap();
    for w in seq.windows(2) {
        assert!(
            w[0].epsilon < w[1].epsilon,
            "epsilon not increasing between n={} and n={}",
            w[0].n,
            w[1].n
        );
    }
    let last = seq.last().unwrap();
    assert_eq!(last.n, 4096);
    assert!(
        last.epsilon >= 0.995 && last.epsilon <= 1.0,
        "eps(4096, 4096) = {}",
        last.epsilon
    );
    // Stirling oracle: eps(n, n) = 1 - ln(2*pi*n)/(2n) + o(1/n).
    let n = 4096.0;
    let stirling = 1.0 - (2.0 * std::f64::consts::PI * n).ln() / (2.0 * n);
    assert!((last.epsilon - stirling).abs() < 1e-4);
}

#[test]
fn epsilon_single_point_against_direct_sum() {
    let spec = DistributionSpec::exponential(1.0).unwrap();
    let eps = epsilon(&spec, 40, 60).unwrap();
    let direct = 60.0_f64.ln() - (21..=60).map(|k| (k as f64).ln()).sum::<f64>() / 40.0;
    assert!((eps - direct).abs() < 1e-12);
}
