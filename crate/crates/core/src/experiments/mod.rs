//! Seed-deterministic Monte Carlo experiment harness.
//!
//! Trials are embarrassingly parallel: trial `i` of schedule point `p` draws
//! from the substream keyed by `(seed, domain, p, i)` and nothing else, and
//! results are reduced in trial order after collection. Reports are therefore
//! byte-identical for a given `(config, seed)` no matter how many workers run
//! the trials — the worker count is deliberately absent from the echoed
//! config.
//!
//! With the `parallel` feature (default) a rayon pool of the requested size
//! maps the trials; `workers <= 1`, or builds without the feature, run the
//! plain sequential loop.

mod analytic;
mod convergence;
mod expectation;
mod lemma_bounds;
pub mod report;
mod tails;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::{Error, Result};

pub use analytic::{
    epsilon_document, potter_document, rate_table_document, EpsilonDoc, PotterDoc, RateTableDoc,
};
pub use convergence::{
    cumulant_convergence_check, expectation_limit_check, ftg_convergence_check,
    moment_convergence_check, CumulantReport, ExpectationLimitPoint, ExpectationLimitReport,
    FtgReport, MomentPoint, MomentsReport,
};
pub use expectation::{
    estimate_expectation, estimate_min_expectation, lln_report, ExpectationPoint,
    ExpectationReport, LlnPoint, LlnReport, MinExpectationPoint, MinExpectationReport,
};
pub use lemma_bounds::{lemma2_bound_check, Lemma2Report, Lemma2Row};
pub use report::ConfigEcho;
pub use tails::{
    cramer_is_estimate, cramer_naive_estimate, ldp_report, ldp_samples, ldp_tail_estimate,
    ldp_tail_from_samples, DeviationSide, LdpReport, TailEstimate,
};

/// Per-trial cell budget for solver-backed experiments.
pub const SOLVER_CELL_LIMIT: u64 = 10_000_000;

/// One `(n, m)` instance size; spelled `n:m` externally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizePair {
    pub n: u64,
    pub m: u64,
}

impl fmt::Display for SizePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n, self.m)
    }
}

impl FromStr for SizePair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |x: &str| -> Result<u64> {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad size {x:?} in pair {s:?}")))
        };
        match s.split_once(':') {
            Some((n, m)) => Ok(SizePair {
                n: parse(n)?,
                m: parse(m)?,
            }),
            // A bare n means a square instance.
            None => {
                let n = parse(s)?;
                Ok(SizePair { n, m: n })
            }
        }
    }
}

/// Renders a schedule as `n:m,n:m,...`.
pub fn schedule_to_string(schedule: &[SizePair]) -> String {
    schedule
        .iter()
        .map(SizePair::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses a `n:m,n:m,...` schedule.
pub fn parse_schedule(s: &str) -> Result<Vec<SizePair>> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| part.trim().parse())
        .collect()
}

/// How a point estimate is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Exact optimum per trial via the assignment solver.
    Solver,
    /// Direct draws of the two-sided control sums, no matrix materialized.
    Sandwich,
    /// Both of the above on disjoint substream domains.
    Both,
}

impl Method {
    pub fn wants_solver(self) -> bool {
        matches!(self, Method::Solver | Method::Both)
    }

    pub fn wants_sandwich(self) -> bool {
        matches!(self, Method::Sandwich | Method::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Solver => "solver",
            Method::Sandwich => "sandwich",
            Method::Both => "both",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solver" => Ok(Method::Solver),
            "sandwich" => Ok(Method::Sandwich),
            "both" => Ok(Method::Both),
            other => Err(Error::InvalidConfig(format!(
                "method must be solver|sandwich|both, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Shared experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub spec: DistributionSpec,
    pub schedule: Vec<SizePair>,
    pub trials: u64,
    pub seed: u64,
    pub method: Method,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() {
            return Err(Error::InvalidConfig("schedule is empty".into()));
        }
        for pair in &self.schedule {
            if pair.n < 1 || pair.m < pair.n {
                return Err(Error::InvalidConfig(format!(
                    "schedule point {pair} needs 1 <= n <= m"
                )));
            }
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn check_solver_feasible(&self) -> Result<()> {
        for pair in &self.schedule {
            if pair.n.saturating_mul(pair.m) > SOLVER_CELL_LIMIT {
                return Err(Error::InstanceTooLarge {
                    n: pair.n as usize,
                    m: pair.m as usize,
                    limit: format!("solver method caps n*m at {SOLVER_CELL_LIMIT} per trial"),
                });
            }
        }
        Ok(())
    }
}

/// Maps `f` over trial indices `0..trials`, preserving trial order in the
/// output. Parallel when built with the `parallel` feature and `workers > 1`;
/// sequential otherwise. The output is identical either way.
pub fn run_trials<T, F>(workers: usize, trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    if workers > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool");
        return pool.install(|| (0..trials).into_par_iter().map(&f).collect());
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    (0..trials).map(f).collect()
}
