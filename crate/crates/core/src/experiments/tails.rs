//! Exponential tail estimates.
//!
//! `ldp_tail_estimate` measures `P(M >= threshold)` (or `<=`) for the
//! assignment maximum at thresholds `n*(c*r + c*gamma + g(1/m))` and attaches
//! the rate-function bounds `-L*(r)` and `-L*(r + eps(m, n))`.
//!
//! `cramer_is_estimate` is the exact-case control for the same machinery:
//! sums of i.i.d. centered Gumbel variates, estimated by importance sampling
//! under the exponentially tilted law. Tilting by `t` turns the centered
//! Gumbel into `-ln W - gamma` with `W ~ Gamma(1 - t, 1)`, so the proposal is
//! sampled by numeric inversion of the incomplete gamma; the estimator
//! averages `exp(-t*S + n*L(t))` over hits, which is unbiased by
//! construction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::evt::{epsilon, gumbel_cgf, gumbel_rate, EULER_GAMMA};
use crate::matrix::Objective;
use crate::rng::{substream, unit_open, DOMAIN_TRIAL};
use crate::special::gamma_quantile;
use crate::stats::SummaryStats;
use crate::{Error, Result};

use super::report::{cell, csv_document, echo, json_document, opt_cell, ConfigEcho};
use super::{run_trials, SOLVER_CELL_LIMIT};

/// Which deviation of the maximum is being measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationSide {
    /// `P(M >= threshold)`.
    UpperDev,
    /// `P(M <= threshold)`.
    LowerDev,
}

impl DeviationSide {
    pub fn as_str(self) -> &'static str {
        match self {
            DeviationSide::UpperDev => "upper_dev",
            DeviationSide::LowerDev => "lower_dev",
        }
    }
}

impl FromStr for DeviationSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" | "upper_dev" => Ok(DeviationSide::UpperDev),
            "lower" | "lower_dev" => Ok(DeviationSide::LowerDev),
            other => Err(Error::InvalidConfig(format!(
                "side must be upper|lower, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for DeviationSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One tail estimate with its rate-function bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub n: u64,
    pub m: u64,
    pub r: f64,
    pub side: DeviationSide,
    pub threshold: f64,
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    /// `(1/n) * ln p_hat`; absent when there were no hits.
    pub log_rate: Option<f64>,
    /// Standard error of `log_rate` (delta method for indicator estimates,
    /// sample standard error of the weights for importance sampling).
    pub std_error_log: Option<f64>,
    /// `-L*(r)`.
    pub bound_upper: f64,
    /// `-L*(r + eps(m, n))`.
    pub bound_lower: f64,
    pub epsilon: f64,
    pub is_weighted: bool,
}

/// A batch of tail estimates sharing one config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LdpReport {
    pub config: ConfigEcho,
    pub estimates: Vec<TailEstimate>,
}

impl LdpReport {
    pub const CSV_HEADER: &'static str = "n,m,r,side,threshold,trials,hits,p_hat,log_rate,\
std_error_log,bound_lower,bound_upper,epsilon,is_weighted";

    pub fn to_csv(&self) -> String {
        let rows = self.estimates.iter().map(|e| {
            format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                e.n,
                e.m,
                cell(e.r),
                e.side,
                cell(e.threshold),
                e.trials,
                e.hits,
                cell(e.p_hat),
                opt_cell(e.log_rate),
                opt_cell(e.std_error_log),
                cell(e.bound_lower),
                cell(e.bound_upper),
                cell(e.epsilon),
                e.is_weighted,
            )
        });
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// Exact maxima of `trials` i.i.d. `n x m` instances, in trial order. The
/// expensive part of a tail study; reusable across thresholds and sides.
pub fn ldp_samples(
    spec: &DistributionSpec,
    n: u64,
    m: u64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<f64>> {
    if n < 1 || m < n {
        return Err(Error::DimensionMismatch(format!(
            "tail study needs 1 <= n <= m, got n={n}, m={m}"
        )));
    }
    if n.saturating_mul(m) > SOLVER_CELL_LIMIT {
        return Err(Error::InstanceTooLarge {
            n: n as usize,
            m: m as usize,
            limit: format!("solver trials cap n*m at {SOLVER_CELL_LIMIT}"),
        });
    }
    let spec = *spec;
    Ok(run_trials(workers, trials, move |trial| {
        let mut rng = substream(seed, DOMAIN_TRIAL, 0, trial);
        let matrix = crate::distributions::sample_matrix(&spec, n as usize, m as usize, &mut rng)
            .expect("samples are finite");
        let (result, _) = solve_max(&matrix);
        result
    }))
}

fn solve_max(matrix: &crate::matrix::CostMatrix) -> (f64, usize) {
    let (res, diag) = crate::solver::solve(matrix, Objective::Max).expect("finite entries");
    (res.value, diag.augmenting_paths)
}

/// Tail estimate over precomputed maxima, at threshold
/// `n*(c*r + c*gamma + g(1/m))`.
pub fn ldp_tail_from_samples(
    samples: &[f64],
    spec: &DistributionSpec,
    n: u64,
    m: u64,
    r: f64,
    side: DeviationSide,
) -> Result<TailEstimate> {
    if samples.is_empty() {
        return Err(Error::InvalidConfig("no tail samples".into()));
    }
    let c = spec
        .classify_exp_type()
        .ok_or_else(|| Error::HypothesisNotSatisfied(spec.to_string()))?;
    let g_m = spec.upper_quantile(1.0 / m as f64)?;
    let threshold = n as f64 * (c * r + c * EULER_GAMMA + g_m);
    let hits = samples
        .iter()
        .filter(|&&v| match side {
            DeviationSide::UpperDev => v >= threshold,
            DeviationSide::LowerDev => v <= threshold,
        })
        .count() as u64;
    let trials = samples.len() as u64;
    let p_hat = hits as f64 / trials as f64;
    let eps = epsilon(spec, n, m)?;
    let (log_rate, std_error_log) = if hits > 0 {
        let log_rate = p_hat.ln() / n as f64;
        // Delta method: sd(ln p_hat) ~ sqrt((1-p)/(p*N)).
        let se = ((1.0 - p_hat) / (p_hat * trials as f64)).sqrt() / n as f64;
        (Some(log_rate), Some(se))
    } else {
        (None, None)
    };
    Ok(TailEstimate {
        n,
        m,
        r,
        side,
        threshold,
        trials,
        hits,
        p_hat,
        log_rate,
        std_error_log,
        bound_upper: -gumbel_rate(r)?.lambda_star,
        bound_lower: -gumbel_rate(r + eps)?.lambda_star,
        epsilon: eps,
        is_weighted: false,
    })
}

/// Runs the solver trials and evaluates one tail estimate.
#[allow(clippy::too_many_arguments)]
pub fn ldp_tail_estimate(
    spec: &DistributionSpec,
    n: u64,
    m: u64,
    r: f64,
    side: DeviationSide,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<TailEstimate> {
    let samples = ldp_samples(spec, n, m, trials, seed, workers)?;
    ldp_tail_from_samples(&samples, spec, n, m, r, side)
}

/// Full report for one solver-backed tail run.
#[allow(clippy::too_many_arguments)]
pub fn ldp_report(
    spec: &DistributionSpec,
    n: u64,
    m: u64,
    r: f64,
    side: DeviationSide,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<LdpReport> {
    let estimate = ldp_tail_estimate(spec, n, m, r, side, trials, seed, workers)?;
    Ok(LdpReport {
        config: echo(&[
            ("command", "ldp".to_string()),
            ("dist", spec.to_string()),
            ("n", n.to_string()),
            ("m", m.to_string()),
            ("r", r.to_string()),
            ("side", side.to_string()),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
        ]),
        estimates: vec![estimate],
    })
}

// One trial of the tilted sum: n tilted centered-Gumbel draws. Tilting by t
// maps to W ~ Gamma(1-t, 1) via X = -ln W - gamma.
fn tilted_sum(n: u64, shape: f64, rng: &mut impl rand_core::RngCore) -> f64 {
    let mut s = 0.0;
    for _ in 0..n {
        let w = gamma_quantile(shape, unit_open(rng));
        s += -w.ln() - EULER_GAMMA;
    }
    s
}

/// Importance-sampled estimate of `P(S_n / n >= r)` (or `<=` for `r < 0`)
/// for sums of independent centered Gumbel variates, using the exponentially
/// tilted proposal at the rate-function maximizer `t*(r)`.
pub fn cramer_is_estimate(
    n: u64,
    r: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<TailEstimate> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(
            "importance sampling needs finite r != 0".into(),
        ));
    }
    if n < 1 || trials < 1 {
        return Err(Error::InvalidParameter(
            "importance sampling needs n >= 1 and trials >= 1".into(),
        ));
    }
    let rate = gumbel_rate(r)?;
    let t_star = rate.t_star;
    if t_star >= 1.0 {
        return Err(Error::TiltInfeasible(t_star));
    }
    let cgf_at_tilt = gumbel_cgf(t_star)
        .finite()
        .expect("t* < 1 keeps the CGF finite");
    let shape = 1.0 - t_star;
    let nf = n as f64;
    let cut = nf * r;

    let weights = run_trials(workers, trials, move |trial| {
        let mut rng = substream(seed, DOMAIN_TRIAL, 1, trial);
        let s = tilted_sum(n, shape, &mut rng);
        let hit = if r > 0.0 { s >= cut } else { s <= cut };
        if hit {
            (-t_star * s + nf * cgf_at_tilt).exp()
        } else {
            0.0
        }
    });

    let stats = SummaryStats::from_values(&weights);
    let hits = weights.iter().filter(|w| **w > 0.0).count() as u64;
    let p_hat = stats.mean;
    let (log_rate, std_error_log) = if p_hat > 0.0 {
        (Some(p_hat.ln() / nf), Some(stats.std_error / p_hat / nf))
    } else {
        (None, None)
    };
    Ok(TailEstimate {
        n,
        m: n,
        r,
        side: if r > 0.0 {
            DeviationSide::UpperDev
        } else {
            DeviationSide::LowerDev
        },
        threshold: cut,
        trials,
        hits,
        p_hat,
        log_rate,
        std_error_log,
        bound_upper: -rate.lambda_star,
        bound_lower: -rate.lambda_star,
        epsilon: 0.0,
        is_weighted: true,
    })
}

/// Plain (unweighted) estimate of the same probability, for cross-checking
/// the importance sampler where both see hits.
pub fn cramer_naive_estimate(
    n: u64,
    r: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<TailEstimate> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(
            "tail estimate needs finite r != 0".into(),
        ));
    }
    let rate = gumbel_rate(r)?;
    let nf = n as f64;
    let cut = nf * r;
    let indicator = run_trials(workers, trials, move |trial| {
        let mut rng = substream(seed, DOMAIN_TRIAL, 2, trial);
        let mut s = 0.0;
        for _ in 0..n {
            // Centered Gumbel via -ln E - gamma with a unit exponential E.
            let e = -(-unit_open(&mut rng)).ln_1p();
            s += -e.ln() - EULER_GAMMA;
        }
        let hit = if r > 0.0 { s >= cut } else { s <= cut };
        if hit {
            1.0
        } else {
            0.0
        }
    });
    let hits = indicator.iter().filter(|w| **w > 0.0).count() as u64;
    let p_hat = hits as f64 / trials as f64;
    let (log_rate, std_error_log) = if hits > 0 {
        (
            Some(p_hat.ln() / nf),
            Some(((1.0 - p_hat) / (p_hat * trials as f64)).sqrt() / nf),
        )
    } else {
        (None, None)
    };
    Ok(TailEstimate {
        n,
        m: n,
        r,
        side: if r > 0.0 {
            DeviationSide::UpperDev
        } else {
            DeviationSide::LowerDev
        },
        threshold: cut,
        trials,
        hits,
        p_hat,
        log_rate,
        std_error_log,
        bound_upper: -rate.lambda_star,
        bound_lower: -rate.lambda_star,
        epsilon: 0.0,
        is_weighted: false,
    })
}
