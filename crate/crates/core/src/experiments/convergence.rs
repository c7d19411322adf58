//! Convergence checks for the centered/normalized sample maximum: cumulant
//! convergence to the centered-Gumbel log-MGF, the expectation limit toward
//! the Euler-Mascheroni constant, moment convergence in the Frechet and
//! Weibull domains, and the distributional limit under the FTG norming.

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::evt::{gumbel_cdf, gumbel_cgf, EULER_GAMMA};
use crate::rng::{substream, DOMAIN_BOOTSTRAP, DOMAIN_PREPASS, DOMAIN_TRIAL};
use crate::special::log_gamma;
use crate::stats::{bootstrap_log_mean_se, harmonic, ks_statistic, SummaryStats};
use crate::{Error, Result};

use super::report::{cell, csv_document, echo, json_document, ConfigEcho};
use super::run_trials;

const BOOTSTRAP_RESAMPLES: usize = 200;
const PREPASS_DRAWS: u64 = 10_000_000;

/// Empirical log-MGF of the centered maximum against the centered-Gumbel
/// target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulantReport {
    pub config: ConfigEcho,
    pub n: u64,
    pub t: f64,
    pub trials: u64,
    /// Centering constant `E M_n` (exact harmonic sum for unit exponentials,
    /// a large pre-pass otherwise).
    pub center: f64,
    pub log_mgf_hat: f64,
    pub target: f64,
    /// Bootstrap standard error of `log_mgf_hat` (200 resamples).
    pub std_error: f64,
}

impl CumulantReport {
    pub const CSV_HEADER: &'static str = "n,t,trials,center,log_mgf_hat,target,std_error";

    pub fn to_csv(&self) -> String {
        let row = format!(
            "{},{},{},{},{},{},{}",
            self.n,
            cell(self.t),
            self.trials,
            cell(self.center),
            cell(self.log_mgf_hat),
            cell(self.target),
            cell(self.std_error),
        );
        csv_document(&self.config, Self::CSV_HEADER, [row])
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// Empirical `ln E exp(t*(M_n - E M_n))` from `trials` draws of the maximum,
/// compared against the centered-Gumbel log-MGF.
///
/// Restricted to `|t| <= 0.4`: the plain estimator's second moment is
/// `Gamma(1 - 2t)`-shaped and blows up as `t -> 1/2`.
pub fn cumulant_convergence_check(
    spec: &DistributionSpec,
    n: u64,
    t: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<CumulantReport> {
    if !(t.abs() <= 0.4) {
        return Err(Error::InvalidParameter(format!(
            "cumulant check needs |t| <= 0.4, got {t}"
        )));
    }
    match spec.classify_exp_type() {
        Some(c) if (c - 1.0).abs() < 1e-12 => {}
        _ => {
            return Err(Error::HypothesisNotSatisfied(format!(
                "{spec} must have an exponential-type tail with parameter 1 (rescale by c first)"
            )))
        }
    }
    if n < 1 || trials < 1 {
        return Err(Error::InvalidParameter(
            "cumulant check needs n >= 1 and trials >= 1".into(),
        ));
    }

    let center = match *spec {
        // The exponential-type gate above pins the rate to 1, so E M_n is
        // the harmonic sum.
        DistributionSpec::Exponential { .. } => harmonic(n),
        _ => {
            // Pre-pass estimate of E M_n on its own substream domain.
            let spec = *spec;
            let sums = run_trials(workers, PREPASS_DRAWS, move |trial| {
                let mut rng = substream(seed, DOMAIN_PREPASS, 0, trial);
                spec.sample_max(n, &mut rng).expect("n >= 1")
            });
            SummaryStats::from_values(&sums).mean
        }
    };

    let spec_copy = *spec;
    let values = run_trials(workers, trials, move |trial| {
        let mut rng = substream(seed, DOMAIN_TRIAL, 0, trial);
        let m_n = spec_copy.sample_max(n, &mut rng).expect("n >= 1");
        (t * (m_n - center)).exp()
    });
    let mean = SummaryStats::from_values(&values).mean;
    let log_mgf_hat = mean.ln();
    let mut boot_rng = substream(seed, DOMAIN_BOOTSTRAP, 0, 0);
    let std_error = bootstrap_log_mean_se(&values, BOOTSTRAP_RESAMPLES, &mut boot_rng);
    let target = gumbel_cgf(t).finite().expect("|t| <= 0.4 < 1");

    Ok(CumulantReport {
        config: echo(&[
            ("command", "cumulant".to_string()),
            ("dist", spec.to_string()),
            ("n", n.to_string()),
            ("t", t.to_string()),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
        ]),
        n,
        t,
        trials,
        center,
        log_mgf_hat,
        target,
        std_error,
    })
}

/// One point of the expectation-limit check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationLimitPoint {
    pub n: u64,
    /// `(E M_n - g(1/n)) / c`.
    pub value: f64,
    /// `|value - gamma|`.
    pub gap: f64,
    /// Whether `value` came from the exact harmonic identity.
    pub exact: bool,
}

/// Trend of `(E M_n - g(1/n))/c` toward the Euler-Mascheroni constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationLimitReport {
    pub config: ConfigEcho,
    pub gamma: f64,
    pub points: Vec<ExpectationLimitPoint>,
}

impl ExpectationLimitReport {
    pub const CSV_HEADER: &'static str = "n,value,gap,exact";

    pub fn to_csv(&self) -> String {
        let rows = self
            .points
            .iter()
            .map(|p| format!("{},{},{},{}", p.n, cell(p.value), cell(p.gap), p.exact));
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// `(E M_n - g(1/n)) / c` per schedule entry; exact via `H_n - ln n` for
/// exponential families, Monte Carlo otherwise.
pub fn expectation_limit_check(
    spec: &DistributionSpec,
    schedule_n: &[u64],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<ExpectationLimitReport> {
    let c = spec
        .classify_exp_type()
        .ok_or_else(|| Error::HypothesisNotSatisfied(spec.to_string()))?;
    if schedule_n.is_empty() {
        return Err(Error::InvalidConfig("schedule of n values is empty".into()));
    }
    let mut points = Vec::with_capacity(schedule_n.len());
    for (idx, &n) in schedule_n.iter().enumerate() {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "expectation limit needs n >= 2".into(),
            ));
        }
        let (value, exact) = match *spec {
            // E M_n = H_n / rate and g(1/n) = ln(n)/rate, so the normalized
            // gap is H_n - ln n for every rate.
            DistributionSpec::Exponential { .. } => (harmonic(n) - (n as f64).ln(), true),
            _ => {
                let g_n = spec.upper_quantile(1.0 / n as f64)?;
                let spec_copy = *spec;
                let values = run_trials(workers, trials, move |trial| {
                    let mut rng = substream(seed, DOMAIN_TRIAL, idx as u64, trial);
                    spec_copy.sample_max(n, &mut rng).expect("n >= 1")
                });
                let mean = SummaryStats::from_values(&values).mean;
                ((mean - g_n) / c, false)
            }
        };
        points.push(ExpectationLimitPoint {
            n,
            value,
            gap: (value - EULER_GAMMA).abs(),
            exact,
        });
    }
    Ok(ExpectationLimitReport {
        config: echo(&[
            ("command", "expectation-limit".to_string()),
            ("dist", spec.to_string()),
            (
                "schedule_n",
                schedule_n
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
        ]),
        gamma: EULER_GAMMA,
        points,
    })
}

/// One point of a moment-convergence schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentPoint {
    pub n: u64,
    pub moment_hat: f64,
    pub std_error: f64,
    pub target: f64,
    pub gap: f64,
}

/// Monte Carlo k-th moments of the normalized maximum against the gamma
/// targets of the max-stable limits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentsReport {
    pub config: ConfigEcho,
    pub k: f64,
    pub points: Vec<MomentPoint>,
}

impl MomentsReport {
    pub const CSV_HEADER: &'static str = "n,moment_hat,std_error,target,gap";

    pub fn to_csv(&self) -> String {
        let rows = self.points.iter().map(|p| {
            format!(
                "{},{},{},{},{}",
                p.n,
                cell(p.moment_hat),
                cell(p.std_error),
                cell(p.target),
                cell(p.gap),
            )
        });
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// `E (M_n / n^{1/alpha})^k` for Pareto entries (Frechet limit, target
/// `Gamma(1 - k/alpha)`), or `E ((b - M_n) * n / (b - a))^k` for uniform
/// entries (Weibull limit with unit shape, target `Gamma(1 + k)`).
///
/// Trials share uniforms across the schedule (common random numbers), so the
/// gap trend along `n` is not drowned by independent sampling noise.
pub fn moment_convergence_check(
    spec: &DistributionSpec,
    k: f64,
    schedule_n: &[u64],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<MomentsReport> {
    if schedule_n.is_empty() {
        return Err(Error::InvalidConfig("schedule of n values is empty".into()));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "moment order must be positive, got {k}"
        )));
    }
    enum Domain {
        Frechet { alpha: f64 },
        Weibull { a: f64, b: f64 },
    }
    let (domain, target) = match *spec {
        DistributionSpec::Pareto { shape } => {
            if k >= shape {
                return Err(Error::MomentOutOfRange { k, alpha: shape });
            }
            (
                Domain::Frechet { alpha: shape },
                log_gamma(1.0 - k / shape).exp(),
            )
        }
        DistributionSpec::Uniform { a, b } => (Domain::Weibull { a, b }, log_gamma(1.0 + k).exp()),
        _ => return Err(Error::HypothesisNotSatisfied(spec.to_string())),
    };

    let mut points = Vec::with_capacity(schedule_n.len());
    for &n in schedule_n {
        if n < 1 {
            return Err(Error::InvalidParameter("moment check needs n >= 1".into()));
        }
        let spec_copy = *spec;
        let statistic: Vec<f64> = match domain {
            Domain::Frechet { alpha } => {
                let scale = (n as f64).powf(1.0 / alpha);
                run_trials(workers, trials, move |trial| {
                    let mut rng = substream(seed, DOMAIN_TRIAL, 0, trial);
                    (spec_copy.sample_max(n, &mut rng).expect("n >= 1") / scale).powf(k)
                })
            }
            Domain::Weibull { a, b } => {
                let scale = (b - a) / n as f64;
                run_trials(workers, trials, move |trial| {
                    let mut rng = substream(seed, DOMAIN_TRIAL, 0, trial);
                    let m_n = spec_copy.sample_max(n, &mut rng).expect("n >= 1");
                    (((b - m_n) / scale).max(0.0)).powf(k)
                })
            }
        };
        let stats = SummaryStats::from_values(&statistic);
        points.push(MomentPoint {
            n,
            moment_hat: stats.mean,
            std_error: stats.std_error,
            target,
            gap: (stats.mean - target).abs(),
        });
    }
    Ok(MomentsReport {
        config: echo(&[
            ("command", "moments".to_string()),
            ("dist", spec.to_string()),
            ("k", k.to_string()),
            (
                "schedule_n",
                schedule_n
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
        ]),
        k,
        points,
    })
}

/// Distributional check of the FTG norming.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FtgReport {
    pub config: ConfigEcho,
    pub n: u64,
    pub trials: u64,
    pub b_n: f64,
    pub a_n: f64,
    /// One-sample KS distance of `(M_n - b_n)/a_n` against the Gumbel CDF.
    pub ks_statistic: f64,
}

impl FtgReport {
    pub const CSV_HEADER: &'static str = "n,trials,b_n,a_n,ks_statistic";

    pub fn to_csv(&self) -> String {
        let row = format!(
            "{},{},{},{},{}",
            self.n,
            self.trials,
            cell(self.b_n),
            cell(self.a_n),
            cell(self.ks_statistic),
        );
        csv_document(&self.config, Self::CSV_HEADER, [row])
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// KS distance between the empirical law of `(M_n - b_n)/a_n` and the
/// standard Gumbel CDF, with `b_n = g(1/n)` and `a_n = h(b_n)`.
pub fn ftg_convergence_check(
    spec: &DistributionSpec,
    n: u64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<FtgReport> {
    if !spec.ftg_condition() {
        return Err(Error::HypothesisNotSatisfied(spec.to_string()));
    }
    if n < 1 || trials < 1 {
        return Err(Error::InvalidParameter(
            "distributional check needs n >= 1 and trials >= 1".into(),
        ));
    }
    // Inline norming so the n = 1 negative control stays runnable.
    let b_n = spec.upper_quantile(1.0 / n as f64)?;
    let a_n = spec.mean_residual(b_n)?;
    let spec_copy = *spec;
    let mut standardized = run_trials(workers, trials, move |trial| {
        let mut rng = substream(seed, DOMAIN_TRIAL, 0, trial);
        (spec_copy.sample_max(n, &mut rng).expect("n >= 1") - b_n) / a_n
    });
    standardized.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
    let ks = ks_statistic(&standardized, gumbel_cdf);
    Ok(FtgReport {
        config: echo(&[
            ("command", "ftg".to_string()),
            ("dist", spec.to_string()),
            ("n", n.to_string()),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
        ]),
        n,
        trials,
        b_n,
        a_n,
        ks_statistic: ks,
    })
}
