//! Moment-tail bound check for the sample maximum: empirical
//! `P(|M_n|^q >= alpha * g(1/n)^q)` against the closed-form envelope
//! `(alpha^{1/q}/2)^{-s} + (E X^- / alpha^{1/q})^s`, valid for
//! `alpha > 2^q` and `n` large.

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::rng::{substream, DOMAIN_TRIAL};
use crate::{Error, Result};

use super::report::{cell, csv_document, echo, json_document, ConfigEcho};
use super::run_trials;

/// One `alpha` cell of the bound check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2Row {
    pub alpha: f64,
    pub empirical: f64,
    pub bound: f64,
    /// Binomial standard error of the empirical probability.
    pub std_error: f64,
}

/// Empirical tail probabilities of `|M_n|^q` against the closed-form bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Report {
    pub config: ConfigEcho,
    pub n: u64,
    pub q: u32,
    pub s: f64,
    pub draws: u64,
    pub mean_neg_part: f64,
    pub rows: Vec<Lemma2Row>,
}

impl Lemma2Report {
    pub const CSV_HEADER: &'static str = "alpha,empirical,bound,std_error";

    pub fn to_csv(&self) -> String {
        let rows = self.rows.iter().map(|r| {
            format!(
                "{},{},{},{}",
                cell(r.alpha),
                cell(r.empirical),
                cell(r.bound),
                cell(r.std_error),
            )
        });
        csv_document(&self.config, Self::CSV_HEADER, rows)
    }

    pub fn to_json(&self) -> String {
        json_document(self)
    }
}

/// The closed-form envelope `(alpha^{1/q}/2)^{-s} + (E X^-/alpha^{1/q})^s`.
pub fn lemma2_bound(q: u32, s: f64, alpha: f64, mean_neg_part: f64) -> f64 {
    let root = alpha.powf(1.0 / q as f64);
    (root / 2.0).powf(-s) + (mean_neg_part / root).powf(s)
}

/// Shares one batch of `draws` maxima across every `alpha` cell; requires
/// `alpha > 2^q` per cell and `n >= s` (the bound's side condition).
#[allow(clippy::too_many_arguments)]
pub fn lemma2_bound_check(
    spec: &DistributionSpec,
    n: u64,
    q: u32,
    s: f64,
    alphas: &[f64],
    draws: u64,
    seed: u64,
    workers: usize,
) -> Result<Lemma2Report> {
    if q == 0 || !(s > 0.0) {
        return Err(Error::InvalidParameter(
            "bound check needs q >= 1 and s > 0".into(),
        ));
    }
    if (n as f64) < s {
        return Err(Error::InvalidParameter(format!(
            "bound check needs n >= s, got n={n}, s={s}"
        )));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("no alpha values".into()));
    }
    let two_pow_q = 2.0_f64.powi(q as i32);
    for &alpha in alphas {
        if !(alpha > two_pow_q) {
            return Err(Error::InvalidParameter(format!(
                "alpha must exceed 2^q = {two_pow_q}, got {alpha}"
            )));
        }
    }
    let g_n = spec.upper_quantile(1.0 / n as f64)?;
    if !(g_n > 0.0 && g_n.is_finite()) {
        return Err(Error::QuantileUndefined(1.0 / n as f64));
    }
    let mean_neg = spec.mean_neg_part();

    let spec_copy = *spec;
    let maxima = run_trials(workers, draws, move |trial| {
        let mut rng = substream(seed, DOMAIN_TRIAL, 0, trial);
        spec_copy.sample_max(n, &mut rng).expect("n >= 1")
    });

    let rows = alphas
        .iter()
        .map(|&alpha| {
            let cut = alpha.powf(1.0 / q as f64) * g_n;
            let hits = maxima.iter().filter(|m| m.abs() >= cut).count() as f64;
            let empirical = hits / draws as f64;
            Lemma2Row {
                alpha,
                empirical,
                bound: lemma2_bound(q, s, alpha, mean_neg),
                std_error: (empirical * (1.0 - empirical) / draws as f64).sqrt(),
            }
        })
        .collect();

    Ok(Lemma2Report {
        config: echo(&[
            ("command", "lemma2".to_string()),
            ("dist", spec.to_string()),
            ("n", n.to_string()),
            ("q", q.to_string()),
            ("s", s.to_string()),
            (
                "alphas",
                alphas
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("draws", draws.to_string()),
            ("seed", seed.to_string()),
        ]),
        n,
        q,
        s,
        draws,
        mean_neg_part: mean_neg,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_formula_examples() {
        // q=2, s=6, alpha=16 with E X^- = 0: (4/2)^{-6} = 1/64.
        assert!((lemma2_bound(2, 6.0, 16.0, 0.0) - 1.0 / 64.0).abs() < 1e-15);
        // Gaussian adds (0.398942/4)^6 ~ 9.85e-7.
        let neg = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let bound = lemma2_bound(2, 6.0, 16.0, neg);
        assert!((bound - (1.0 / 64.0 + (neg / 4.0).powi(6))).abs() < 1e-15);
        assert!((bound - 0.015_625_985).abs() < 1e-8);
    }

    #[test]
    fn exponential_cells_stay_below_bound() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        let report =
            lemma2_bound_check(&spec, 1000, 2, 6.0, &[8.0, 16.0, 32.0], 20_000, 77, 2).unwrap();
        for row in &report.rows {
            assert!(
                row.empirical <= row.bound + 3.0 * row.std_error,
                "alpha={}: {} > {}",
                row.alpha,
                row.empirical,
                row.bound
            );
        }
        // At alpha=16 the event needs M_n >= 4 ln n; the union bound puts its
        // probability near n^{-3}, far beneath 1/64.
        let at_16 = report.rows.iter().find(|r| r.alpha == 16.0).unwrap();
        assert!(at_16.empirical < 1.0 / 64.0);
    }

    #[test]
    fn alpha_at_or_below_2_pow_q_is_rejected() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        assert!(matches!(
            lemma2_bound_check(&spec, 100, 2, 6.0, &[4.0], 10, 1, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn side_condition_requires_n_at_least_s() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        assert!(lemma2_bound_check(&spec, 4, 2, 6.0, &[8.0], 10, 1, 1).is_err());
    }
}
