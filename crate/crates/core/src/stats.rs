//! Summary statistics and goodness-of-fit utilities.

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

/// Mean, sample variance, and standard error of a Monte Carlo batch.
///
/// Accumulated in index order so results are independent of any parallel
/// schedule that produced the values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub count: u64,
    pub min: f64,
    pub max: f64,
}

impl SummaryStats {
    /// Two-pass summary over `values` in the given order.
    pub fn from_values(values: &[f64]) -> SummaryStats {
        assert!(!values.is_empty(), "summary of an empty batch");
        let count = values.len() as u64;
        let mean = values.iter().sum::<f64>() / count as f64;
        let variance = if count > 1 {
            values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count as f64 - 1.0)
        } else {
            0.0
        };
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &x in values {
            min = min.min(x);
            max = max.max(x);
        }
        SummaryStats {
            mean,
            variance,
            std_error: (variance / count as f64).sqrt(),
            count,
            min,
            max,
        }
    }
}

/// One-sample Kolmogorov-Smirnov statistic of sorted samples against `cdf`:
/// `sup_x |F_hat(x) - F(x)|`.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max(((i as f64 + 1.0) / n - f).abs());
    }
    sup
}

/// Critical value of the one-sample KS statistic at significance `alpha`
/// (asymptotic): `sqrt(-ln(alpha/2) / 2) / sqrt(n)`.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// `H_n`, the n-th harmonic number, by direct summation.
pub fn harmonic(n: u64) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Bootstrap standard error of `ln(mean(values))` over `resamples` draws with
/// replacement. The resampling stream is owned by the caller.
pub fn bootstrap_log_mean_se(values: &[f64], resamples: usize, rng: &mut impl RngCore) -> f64 {
    let n = values.len();
    assert!(n > 0);
    let mut log_means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let mut sum = 0.0;
        for _ in 0..n {
            // Top-53-bit index draw; bias is ~n / 2^53.
            let idx =
                (((rng.next_u64() >> 11) as f64 / 9_007_199_254_740_992.0) * n as f64) as usize;
            sum += values[idx.min(n - 1)];
        }
        log_means.push((sum / n as f64).ln());
    }
    SummaryStats::from_values(&log_means).variance.sqrt()
}
