//! Expectation and law-of-large-numbers experiments for the assignment
//! maximum/minimum.

use serde::Serialize;

use crate::distributions::{sample_matrix, DistributionSpec};
use crate::greedy::sandwich_sample;
use crate::matrix::Objective;
use crate::rng::{substream, DOMAIN_TRIAL};
use crate::solver::solve;
use crate::stats::SummaryStats;
use crate::{Error, Result};

use super::report::{cell, csv_document, echo, json_document, opt_cell, ConfigEcho};
use super::{run_trials, schedule_to_string, ExperimentConfig};

// Sandwich draws live on their own substream domain so "both" runs are
// reproducible against either single method.
const DOMAIN_SANDWICH: u64 = 3;

/// One schedule point of the expectation experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationPoint {
    pub n: u64,
    pub m: u64,
    /// Normalizer `n * g(1/m)`.
    pub norm: f64,
    pub solver: Option<SummaryStats>,
    /// `solver.mean / norm`.
    pub solver_ratio: Option<f64>,
    pub sandwich_lower: Option<SummaryStats>,
    pub sandwich_upper: Option<SummaryStats>,
    pub lower_ratio: Option<f64>,
    pub upper_ratio: Option<f64>,
}

/// Monte Carlo estimate of the expected maximum per schedule point, with the
/// ratio to `n * g(1/m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationReport {
    pub config: ConfigEcho,
    pub points: Vec<ExpectationPoint>,
}

impl ExpectationReport {
    pub const CSV_HEADER: &'static str = "n,m,norm,solver_mean,solver_variance,solver_std_error,\
solver_min,solver_max,solver_ratio,lower_mean,lower_std_error,lower_ratio,upper_mean,\
upper_std_error,upper_ratio";

    pub fn to_csv(&self) -> String {
        let rows = self.points.iter().map(|p| {
            format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                p.n,
                p.m,
                cell(p.norm),
                opt_cell(p.solver.map(|s| s.mean)),
                opt_cell(p.solver.map(|s| s.variance)),
                opt_cell(p.solver.map(|s| s.std_error)),
                opt_cell(p.solver.map(|s| s.min)),
                opt_cell(p.solver.map(|s| s.max)),
                opt_cell(p.solver_ratio),
                opt_cell(p.sandwich_lower.map(|s| s.mean)),
                opt_cell(p.sandwich_lower.map(|s| s.std_error)),
                opt_cell(p.lower_ratio),
                opt_cell(p.sandwich_upper.map(|s| s.mean)),
                opt_cell(p.sandwich_upper.map(|s| s.std_error)),
                opt_cell(p.upper_ratio),
            )
        });
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

fn base_echo(command: &str, config: &ExperimentConfig) -> ConfigEcho {
    echo(&[
        ("command", command.to_string()),
        ("dist", config.spec.to_string()),
        ("schedule", schedule_to_string(&config.schedule)),
        ("trials", config.trials.to_string()),
        ("seed", config.seed.to_string()),
        ("method", config.method.to_string()),
    ])
}

/// Per-trial exact maxima for one schedule point, in trial order.
pub(crate) fn solver_values(
    config: &ExperimentConfig,
    point_index: u64,
    n: u64,
    m: u64,
    objective: Objective,
) -> Vec<f64> {
    let spec = config.spec;
    let seed = config.seed;
    run_trials(config.workers, config.trials, move |trial| {
        let mut rng = substream(seed, DOMAIN_TRIAL, point_index, trial);
        let matrix =
            sample_matrix(&spec, n as usize, m as usize, &mut rng).expect("samples are finite");
        let (result, _) = solve(&matrix, objective).expect("finite entries solve");
        // Exact chain on every maximizing trial: greedy <= optimum <= sum of
        // row maxima.
        #[cfg(debug_assertions)]
        if objective == Objective::Max {
            let greedy = crate::greedy::greedy_assignment(&matrix)
                .expect("schedule has n <= m")
                .value;
            debug_assert!(greedy <= result.value);
            debug_assert!(result.value <= crate::matrix::row_maxima_sum(&matrix));
        }
        result.value
    })
}

fn sandwich_values(
    config: &ExperimentConfig,
    point_index: u64,
    n: u64,
    m: u64,
) -> (Vec<f64>, Vec<f64>) {
    let spec = config.spec;
    let seed = config.seed;
    let pairs = run_trials(config.workers, config.trials, move |trial| {
        let mut rng = substream(seed, DOMAIN_SANDWICH, point_index, trial);
        sandwich_sample(&spec, n, m, &mut rng).expect("validated shape")
    });
    pairs.into_iter().unzip()
}

/// Monte Carlo mean of the exact maximum (and/or the sandwich control sums)
/// per schedule point, with ratios to `n * g(1/m)`.
pub fn estimate_expectation(config: &ExperimentConfig) -> Result<ExpectationReport> {
    config.validate()?;
    if config.method.wants_solver() {
        config.check_solver_feasible()?;
    }
    let mut points = Vec::with_capacity(config.schedule.len());
    for (idx, pair) in config.schedule.iter().enumerate() {
        let norm = pair.n as f64 * config.spec.upper_quantile(1.0 / pair.m as f64)?;
        // g(1/m) can vanish (e.g. exponential at m = 1, centered gaussian at
        // m = 2); the means stay meaningful but the ratios do not.
        let norm_usable = norm.is_finite() && norm != 0.0;
        let solver = if config.method.wants_solver() {
            Some(SummaryStats::from_values(&solver_values(
                config,
                idx as u64,
                pair.n,
                pair.m,
                Objective::Max,
            )))
        } else {
            None
        };
        let (lower, upper) = if config.method.wants_sandwich() {
            let (lo, hi) = sandwich_values(config, idx as u64, pair.n, pair.m);
            (
                Some(SummaryStats::from_values(&lo)),
                Some(SummaryStats::from_values(&hi)),
            )
        } else {
            (None, None)
        };
        let ratio_of = |stats: Option<SummaryStats>| {
            stats.and_then(|s| norm_usable.then(|| s.mean / norm))
        };
        points.push(ExpectationPoint {
            n: pair.n,
            m: pair.m,
            norm,
            solver,
            solver_ratio: ratio_of(solver),
            sandwich_lower: lower,
            sandwich_upper: upper,
            lower_ratio: ratio_of(lower),
            upper_ratio: ratio_of(upper),
        });
    }
    Ok(ExpectationReport {
        config: base_echo("expectation", config),
        points,
    })
}

/// One square point of the minimum-expectation experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinExpectationPoint {
    pub n: u64,
    pub m: u64,
    pub stats: SummaryStats,
    /// `sum_{k<=n} k^{-2}` for unit-rate exponential square instances.
    pub oracle: Option<f64>,
    pub gap: Option<f64>,
}

/// Monte Carlo estimate of the expected minimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinExpectationReport {
    pub config: ConfigEcho,
    pub points: Vec<MinExpectationPoint>,
}

impl MinExpectationReport {
    pub const CSV_HEADER: &'static str = "n,m,mean,variance,std_error,min,max,oracle,gap";

    pub fn to_csv(&self) -> String {
        let rows = self.points.iter().map(|p| {
            format!(
                "{},{},{},{},{},{},{},{},{}",
                p.n,
                p.m,
                cell(p.stats.mean),
                cell(p.stats.variance),
                cell(p.stats.std_error),
                cell(p.stats.min),
                cell(p.stats.max),
                opt_cell(p.oracle),
                opt_cell(p.gap),
            )
        });
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// Exact expected minimum for unit-rate exponential square instances:
/// `sum_{k=1}^{n} k^{-2}`. Summed in ascending k.
pub fn exponential_min_oracle(n: u64) -> f64 {
    (1..=n).map(|k| 1.0 / (k as f64 * k as f64)).sum()
}

/// Monte Carlo mean of the exact minimum per schedule point; attaches the
/// `sum k^{-2}` oracle on unit-rate exponential square instances.
pub fn estimate_min_expectation(config: &ExperimentConfig) -> Result<MinExpectationReport> {
    config.validate()?;
    config.check_solver_feasible()?;
    let is_unit_exponential =
        matches!(config.spec, DistributionSpec::Exponential { rate } if rate == 1.0);
    let mut points = Vec::with_capacity(config.schedule.len());
    for (idx, pair) in config.schedule.iter().enumerate() {
        let values = solver_values(config, idx as u64, pair.n, pair.m, Objective::Min);
        let stats = SummaryStats::from_values(&values);
        let oracle =
            (is_unit_exponential && pair.n == pair.m).then(|| exponential_min_oracle(pair.n));
        points.push(MinExpectationPoint {
            n: pair.n,
            m: pair.m,
            stats,
            oracle,
            gap: oracle.map(|o| (stats.mean - o).abs()),
        });
    }
    Ok(MinExpectationReport {
        config: base_echo("min-expectation", config),
        points,
    })
}

/// One schedule point of the law-of-large-numbers check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LlnPoint {
    pub n: u64,
    pub m: u64,
    pub norm: f64,
    /// Fraction of trials with `|value/norm - 1| > band`.
    pub exceed_fraction: f64,
    pub ratio_mean: f64,
    /// Sample standard deviation of the normalized ratio.
    pub ratio_std: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

/// Empirical convergence-in-probability report for the normalized maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LlnReport {
    pub config: ConfigEcho,
    pub band: f64,
    pub points: Vec<LlnPoint>,
}

impl LlnReport {
    pub const CSV_HEADER: &'static str =
        "n,m,norm,exceed_fraction,ratio_mean,ratio_std,ratio_min,ratio_max";

    pub fn to_csv(&self) -> String {
        let rows = self.points.iter().map(|p| {
            format!(
                "{},{},{},{},{},{},{},{}",
                p.n,
                p.m,
                cell(p.norm),
                cell(p.exceed_fraction),
                cell(p.ratio_mean),
                cell(p.ratio_std),
                cell(p.ratio_min),
                cell(p.ratio_max),
            )
        });
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// Exceedance frequencies and dispersion of `value / (n * g(1/m))` per
/// schedule point.
pub fn lln_report(config: &ExperimentConfig, tolerance_band: f64) -> Result<LlnReport> {
    config.validate()?;
    config.check_solver_feasible()?;
    if !(tolerance_band > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance band must be positive, got {tolerance_band}"
        )));
    }
    let mut points = Vec::with_capacity(config.schedule.len());
    for (idx, pair) in config.schedule.iter().enumerate() {
        let norm = pair.n as f64 * config.spec.upper_quantile(1.0 / pair.m as f64)?;
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "normalizer n*g(1/m) = {norm} at {pair} cannot scale the ratio"
            )));
        }
        let ratios: Vec<f64> = solver_values(config, idx as u64, pair.n, pair.m, Objective::Max)
            .into_iter()
            .map(|v| v / norm)
            .collect();
        let stats = SummaryStats::from_values(&ratios);
        let exceed = ratios
            .iter()
            .filter(|r| (**r - 1.0).abs() > tolerance_band)
            .count() as f64
            / ratios.len() as f64;
        points.push(LlnPoint {
            n: pair.n,
            m: pair.m,
            norm,
            exceed_fraction: exceed,
            ratio_mean: stats.mean,
            ratio_std: stats.variance.sqrt(),
            ratio_min: stats.min,
            ratio_max: stats.max,
        });
    }
    let mut config_echo = base_echo("lln", config);
    config_echo.insert("band".into(), tolerance_band.to_string());
    Ok(LlnReport {
        config: config_echo,
        band: tolerance_band,
        points,
    })
}
