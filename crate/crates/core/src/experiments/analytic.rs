//! Report documents for the purely analytic subcommands (no Monte Carlo):
//! the rate-function table, the rectangularity correction, and the Potter
//! envelope check.

use serde::Serialize;

use crate::distributions::{DistributionSpec, PotterReport};
use crate::evt::{epsilon_schedule, rate_function_table, EpsilonReport};
use crate::Result;

use super::report::{cell, csv_document, echo, json_document, ConfigEcho};

/// Rate-function table document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateTableDoc {
    pub config: ConfigEcho,
    pub grid_r: Vec<f64>,
    pub lambda_star: Vec<f64>,
    pub t_star: Vec<f64>,
    pub gamma_const: f64,
}

impl RateTableDoc {
    pub const CSV_HEADER: &'static str = "r,lambda_star,t_star";

    pub fn to_csv(&self) -> String {
        let rows = (0..self.grid_r.len()).map(|i| {
            format!(
                "{},{},{}",
                cell(self.grid_r[i]),
                cell(self.lambda_star[i]),
                cell(self.t_star[i]),
            )
        });
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// Tabulates the centered-Gumbel rate function on an inclusive grid.
pub fn rate_table_document(r_min: f64, r_max: f64, step: f64) -> Result<RateTableDoc> {
    let table = rate_function_table(r_min, r_max, step)?;
    Ok(RateTableDoc {
        config: echo(&[
            ("command", "rate-function".to_string()),
            ("r_min", r_min.to_string()),
            ("r_max", r_max.to_string()),
            ("step", step.to_string()),
        ]),
        grid_r: table.grid_r,
        lambda_star: table.lambda_star,
        t_star: table.maximizer_t,
        gamma_const: table.gamma_const,
    })
}

/// Rectangularity-correction document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonDoc {
    pub config: ConfigEcho,
    pub report: EpsilonReport,
}

impl EpsilonDoc {
    pub const CSV_HEADER: &'static str = "n,m,epsilon,eps_inf,eps_sup";

    pub fn to_csv(&self) -> String {
        let rows: Vec<String> = match &self.report.sequence_values {
            Some(points) => points
                .iter()
                .map(|p| {
                    format!(
                        "{},{},{},{},{}",
                        p.n,
                        p.m,
                        cell(p.epsilon),
                        cell(self.report.eps_inf),
                        cell(self.report.eps_sup),
                    )
                })
                .collect(),
            None => vec![format!(
                "{},{},{},{},{}",
                self.report.n,
                self.report.m,
                cell(self.report.epsilon),
                cell(self.report.eps_inf),
                cell(self.report.eps_sup),
            )],
        };
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// Evaluates the correction along a schedule of `(n, m)` pairs.
pub fn epsilon_document(spec: &DistributionSpec, schedule: &[(u64, u64)]) -> Result<EpsilonDoc> {
    let report = epsilon_schedule(spec, schedule)?;
    let schedule_str = schedule
        .iter()
        .map(|(n, m)| format!("{n}:{m}"))
        .collect::<Vec<_>>()
        .join(",");
    Ok(EpsilonDoc {
        config: echo(&[
            ("command", "epsilon".to_string()),
            ("dist", spec.to_string()),
            ("schedule", schedule_str),
        ]),
        report,
    })
}

/// Potter envelope document; rows are the violating pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotterDoc {
    pub config: ConfigEcho,
    pub report: PotterReport,
}

impl PotterDoc {
    pub const CSV_HEADER: &'static str = "x,y,ratio,bound";

    pub fn to_csv(&self) -> String {
        let rows = self.report.violations.iter().map(|v| {
            format!(
                "{},{},{},{}",
                cell(v.x),
                cell(v.y),
                cell(v.ratio),
                cell(v.bound),
            )
        });
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// Runs the Potter check and wraps it with its effective config.
pub fn potter_document(
    spec: &DistributionSpec,
    a: f64,
    delta: f64,
    x0: f64,
    grid_size: usize,
) -> Result<PotterDoc> {
    let report = spec.potter_check(a, delta, x0, grid_size)?;
    Ok(PotterDoc {
        config: echo(&[
            ("command", "potter".to_string()),
            ("dist", spec.to_string()),
            ("a", a.to_string()),
            ("delta", delta.to_string()),
            ("x0", x0.to_string()),
            ("grid", grid_size.to_string()),
        ]),
        report,
    })
}
