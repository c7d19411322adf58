//! Parametric distribution families for the matrix entries.
//!
//! Each family exposes sampling (inverse-CDF from a uniform stream, so every
//! draw is a pure function of one uniform), the upper tail `P(X >= t)`, the
//! upper quantile `g(p) = inf{r : P(X >= r) < p}`, the mean-residual scale
//! `h(t)`, Fisher-Tippett-Gnedenko norming constants `b_n = g(1/n)`,
//! `a_n = h(b_n)`, the exponential-type tail parameter `c = lim a_n` where it
//! is known, and a grid check of the Potter envelope for slowly varying
//! quantile functions.
//!
//! Sampling the maximum of `n` i.i.d. copies uses the identity
//! `quantile_max(u) = quantile(u^{1/n})`, evaluated in log space so a single
//! uniform yields one `M_n` draw at any `n` without precision loss.

use std::fmt;
use std::str::FromStr;

use rand_core::RngCore;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matrix::CostMatrix;
use crate::rng::unit_open;
use crate::special::{
    adaptive_simpson, log_gamma, normal_pdf, normal_tail, normal_upper_quantile, EULER_GAMMA,
};
use crate::{Error, Result};

/// Fisher-Tippett-Gnedenko norming constants for the sample maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormingConstants {
    pub n: u64,
    /// Location: `b_n = g(1/n)`.
    pub b_n: f64,
    /// Scale: `a_n = h(b_n)`, always positive.
    pub a_n: f64,
}

/// One violating pair reported by [`DistributionSpec::potter_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotterViolation {
    pub x: f64,
    pub y: f64,
    /// `g(x) / g(y)`.
    pub ratio: f64,
    /// `A * max((x/y)^delta, (y/x)^delta)`.
    pub bound: f64,
}

/// Grid evaluation of the Potter envelope `g(x)/g(y) <= A*max((x/y)^d,(y/x)^d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotterReport {
    pub a: f64,
    pub delta: f64,
    pub x0: f64,
    pub grid_size: usize,
    pub pairs_checked: usize,
    pub violations: Vec<PotterViolation>,
}

/// Parametric family of the i.i.d. matrix entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    /// Rate `lambda > 0`, support `[0, inf)`.
    Exponential { rate: f64 },
    /// Mean and standard deviation `sd > 0`.
    Gaussian { mean: f64, sd: f64 },
    /// Location and scale (`scale > 0`); CDF `exp(-exp(-(t-loc)/scale))`.
    Gumbel { loc: f64, scale: f64 },
    /// Uniform on `[a, b)` with `a < b`.
    Uniform { a: f64, b: f64 },
    /// Frechet shape `alpha > 0`; CDF `exp(-t^-alpha)` on `t > 0`.
    Frechet { shape: f64 },
    /// Negative Weibull shape `alpha > 0`, support `(-inf, 0]`;
    /// CDF `exp(-(-t)^alpha)` for `t <= 0`.
    WeibullNeg { shape: f64 },
    /// Pareto shape `alpha > 0` with minimum fixed at 1; tail `t^-alpha`.
    Pareto { shape: f64 },
    /// Point mass at `value`.
    Degenerate { value: f64 },
}

use DistributionSpec::*;

impl DistributionSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exponential rate must be positive, got {rate}"
            )));
        }
        Ok(Exponential { rate })
    }

    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gaussian needs finite mean and sd > 0, got ({mean}, {sd})"
            )));
        }
        Ok(Gaussian { mean, sd })
    }

    pub fn gumbel(loc: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && loc.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gumbel needs finite loc and scale > 0, got ({loc}, {scale})"
            )));
        }
        Ok(Gumbel { loc, scale })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "uniform needs a < b, got ({a}, {b})"
            )));
        }
        Ok(Uniform { a, b })
    }

    pub fn frechet(shape: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "frechet shape must be positive, got {shape}"
            )));
        }
        Ok(Frechet { shape })
    }

    pub fn weibull_neg(shape: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weibull_neg shape must be positive, got {shape}"
            )));
        }
        Ok(WeibullNeg { shape })
    }

    pub fn pareto(shape: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pareto shape must be positive, got {shape}"
            )));
        }
        Ok(Pareto { shape })
    }

    pub fn degenerate(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "degenerate point must be finite, got {value}"
            )));
        }
        Ok(Degenerate { value })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Exponential { .. } => "exponential",
            Gaussian { .. } => "gaussian",
            Gumbel { .. } => "gumbel",
            Uniform { .. } => "uniform",
            Frechet { .. } => "frechet",
            WeibullNeg { .. } => "weibull_neg",
            Pareto { .. } => "pareto",
            Degenerate { .. } => "degenerate",
        }
    }

    /// CDF `P(X <= t)`.
    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            Exponential { rate } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-rate * t).exp_m1()
                }
            }
            Gaussian { mean, sd } => normal_tail(-(t - mean) / sd),
            Gumbel { loc, scale } => (-(-(t - loc) / scale).exp()).exp(),
            Uniform { a, b } => ((t - a) / (b - a)).clamp(0.0, 1.0),
            Frechet { shape } => {
                if t <= 0.0 {
                    0.0
                } else {
                    (-t.powf(-shape)).exp()
                }
            }
            WeibullNeg { shape } => {
                if t >= 0.0 {
                    1.0
                } else {
                    (-(-t).powf(shape)).exp()
                }
            }
            Pareto { shape } => {
                if t <= 1.0 {
                    0.0
                } else {
                    -(-shape * t.ln()).exp_m1()
                }
            }
            Degenerate { value } => {
                if t < value {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Upper tail `P(X >= t)`; nonincreasing in `t` with values in [0, 1].
    pub fn tail(&self, t: f64) -> f64 {
        match *self {
            Exponential { rate } => {
                if t <= 0.0 {
                    1.0
                } else {
                    (-rate * t).exp()
                }
            }
            Gaussian { mean, sd } => normal_tail((t - mean) / sd),
            Gumbel { loc, scale } => -(-(-(t - loc) / scale).exp()).exp_m1(),
            Uniform { a, b } => ((b - t) / (b - a)).clamp(0.0, 1.0),
            Frechet { shape } => {
                if t <= 0.0 {
                    1.0
                } else {
                    -(-t.powf(-shape)).exp_m1()
                }
            }
            WeibullNeg { shape } => {
                if t > 0.0 {
                    0.0
                } else {
                    -(-(-t).powf(shape)).exp_m1()
                }
            }
            Pareto { shape } => {
                if t <= 1.0 {
                    1.0
                } else {
                    (-shape * t.ln()).exp()
                }
            }
            Degenerate { value } => {
                if t <= value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Lower quantile at `u` in (0, 1): the inverse CDF applied to `u`.
    pub fn quantile(&self, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u < 1.0);
        match *self {
            Exponential { rate } => -(-u).ln_1p() / rate,
            Gaussian { mean, sd } => mean - sd * normal_upper_quantile(u),
            Gumbel { loc, scale } => loc - scale * (-u.ln()).ln(),
            Uniform { a, b } => a + u * (b - a),
            Frechet { shape } => (-u.ln()).powf(-1.0 / shape),
            WeibullNeg { shape } => -(-u.ln()).powf(1.0 / shape),
            Pareto { shape } => (-(-u).ln_1p() / shape).exp(),
            Degenerate { value } => value,
        }
    }

    // Upper quantile for p in (0, 1]; may be -inf for p = 1 on families
    // unbounded below.
    fn upper_quantile_raw(&self, p: f64) -> f64 {
        match *self {
            Exponential { rate } => -p.ln() / rate,
            Gaussian { mean, sd } => {
                if p == 1.0 {
                    f64::NEG_INFINITY
                } else {
                    mean + sd * normal_upper_quantile(p)
                }
            }
            Gumbel { loc, scale } => loc - scale * (-(-p).ln_1p()).ln(),
            Uniform { a, b } => b - p * (b - a),
            Frechet { shape } => {
                if p == 1.0 {
                    0.0
                } else {
                    (-(-p).ln_1p()).powf(-1.0 / shape)
                }
            }
            WeibullNeg { shape } => {
                if p == 1.0 {
                    f64::NEG_INFINITY
                } else {
                    -(-(-p).ln_1p()).powf(1.0 / shape)
                }
            }
            Pareto { shape } => (-p.ln() / shape).exp(),
            Degenerate { value } => value,
        }
    }

    /// Upper quantile `g(p) = inf{r : P(X >= r) < p}` for `p` in (0, 1].
    ///
    /// Closed form for every family. For families unbounded below, `g(1)` is
    /// negative infinity; callers that need finite values must check.
    pub fn upper_quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::QuantileOutOfRange(p));
        }
        Ok(self.upper_quantile_raw(p))
    }

    /// Upper quantile by monotone bisection on the tail, to 1e-12 relative.
    /// Exists as an independent route for cross-checking the closed forms.
    pub fn upper_quantile_bisect(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::QuantileOutOfRange(p));
        }
        // Bracket [lo, hi] with tail(lo) >= p > tail(hi), doubling outward.
        let mut lo;
        let mut hi;
        if self.tail(0.0) >= p {
            lo = 0.0;
            hi = 1.0;
            while self.tail(hi) >= p {
                lo = hi;
                hi *= 2.0;
                if hi > 1e300 {
                    return Ok(f64::INFINITY);
                }
            }
        } else {
            hi = 0.0;
            lo = -1.0;
            while self.tail(lo) < p {
                hi = lo;
                lo *= 2.0;
                if lo < -1e300 {
                    return Ok(f64::NEG_INFINITY);
                }
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.tail(mid) >= p {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo).abs() <= 1e-13 * lo.abs().max(hi.abs()).max(1e-3) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// One variate: inverse CDF applied to a single uniform draw.
    pub fn sample(&self, rng: &mut impl RngCore) -> f64 {
        self.quantile(unit_open(rng))
    }

    /// Quantile of `M_n = max(X_1..X_n)` at level `u`, via
    /// `quantile(u^{1/n})` computed as an upper quantile at
    /// `p = -expm1(ln(u)/n)` so it stays accurate for large `n`.
    pub fn max_quantile(&self, n: u64, u: f64) -> f64 {
        debug_assert!(n >= 1 && u > 0.0 && u < 1.0);
        let p = -(u.ln() / n as f64).exp_m1();
        self.upper_quantile_raw(p)
    }

    /// One variate of the sample maximum `M_n`, from a single uniform draw.
    pub fn sample_max(&self, n: u64, rng: &mut impl RngCore) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "sample maximum needs n >= 1".into(),
            ));
        }
        Ok(self.max_quantile(n, unit_open(rng)))
    }

    /// Mean residual `h(t) = int_t^inf P(X >= x) dx / P(X >= t)`.
    ///
    /// Closed forms where available; otherwise adaptive quadrature of the
    /// tail to 1e-10 relative. Errors when the tail vanishes at `t` or the
    /// tail integral diverges.
    pub fn mean_residual(&self, t: f64) -> Result<f64> {
        match *self {
            Exponential { rate } => {
                // Memoryless above 0; below 0 the tail is 1 out to the origin.
                Ok(if t >= 0.0 { 1.0 / rate } else { 1.0 / rate - t })
            }
            Gaussian { mean, sd } => {
                let z = (t - mean) / sd;
                let tail = normal_tail(z);
                if tail <= 0.0 {
                    return Err(Error::ZeroTail(t));
                }
                // int_z^inf normal_tail = pdf(z) - z*tail.
                Ok(sd * (normal_pdf(z) / tail - z))
            }
            Gumbel { loc, scale } => {
                let z = (t - loc) / scale;
                let tail = -(-(-z).exp()).exp_m1();
                if tail <= 0.0 {
                    return Err(Error::ZeroTail(t));
                }
                // Substituting w = e^{-x}: int_z^inf tail dx
                //   = int_0^{e^{-z}} (1 - e^{-w}) / w dw.
                let upper = (-z).exp();
                let integrand = |w: f64| {
                    if w < 1e-8 {
                        1.0 - 0.5 * w
                    } else {
                        -(-w).exp_m1() / w
                    }
                };
                let coarse = adaptive_simpson(integrand, 0.0, upper, 1e-6);
                let integral =
                    adaptive_simpson(integrand, 0.0, upper, 1e-11 * coarse.abs().max(1e-9));
                Ok(scale * integral / tail)
            }
            Uniform { a, b } => {
                if t >= b {
                    Err(Error::ZeroTail(t))
                } else if t >= a {
                    Ok(0.5 * (b - t))
                } else {
                    Ok((a - t) + 0.5 * (b - a))
                }
            }
            Frechet { shape } => {
                if shape <= 1.0 {
                    return Err(Error::DivergentIntegral(format!(
                        "frechet tail integral diverges for shape {shape} <= 1"
                    )));
                }
                if t <= 0.0 {
                    // Tail is 1 down to 0 plus the full mean above it.
                    return Ok(-t + (log_gamma(1.0 - 1.0 / shape)).exp());
                }
                let tail = self.tail(t);
                if tail <= 0.0 {
                    return Err(Error::ZeroTail(t));
                }
                Ok(frechet_tail_integral(shape, t) / tail)
            }
            WeibullNeg { shape } => {
                if t >= 0.0 {
                    return Err(Error::ZeroTail(t));
                }
                let tail = self.tail(t);
                // int_t^0 (1 - e^{-(-x)^alpha}) dx = int_0^{-t} (1 - e^{-y^alpha}) dy.
                let f = |y: f64| -(-y.powf(shape)).exp_m1();
                let coarse = adaptive_simpson(f, 0.0, -t, 1e-6);
                let integral = adaptive_simpson(f, 0.0, -t, 1e-11 * coarse.abs().max(1e-9));
                Ok(integral / tail)
            }
            Pareto { shape } => {
                if shape <= 1.0 {
                    return Err(Error::DivergentIntegral(format!(
                        "pareto tail integral diverges for shape {shape} <= 1"
                    )));
                }
                if t <= 1.0 {
                    Ok((1.0 - t) + 1.0 / (shape - 1.0))
                } else {
                    Ok(t / (shape - 1.0))
                }
            }
            Degenerate { value } => {
                if t >= value {
                    Err(Error::ZeroTail(t))
                } else {
                    Ok(value - t)
                }
            }
        }
    }

    /// Whether the family is hard-coded to satisfy the max-domain condition
    /// behind the Gumbel limit used for the norming constants.
    pub fn ftg_condition(&self) -> bool {
        matches!(self, Exponential { .. } | Gumbel { .. })
    }

    /// Norming constants `b_n = g(1/n)`, `a_n = h(b_n)` for `n >= 2`.
    pub fn norming_constants(&self, n: u64) -> Result<NormingConstants> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "norming constants need n >= 2, got {n}"
            )));
        }
        if !self.ftg_condition() {
            return Err(Error::HypothesisNotSatisfied(self.to_string()));
        }
        let b_n = self.upper_quantile(1.0 / n as f64)?;
        let a_n = self.mean_residual(b_n)?;
        debug_assert!(a_n > 0.0);
        Ok(NormingConstants { n, b_n, a_n })
    }

    /// Exponential-type tail parameter `c = lim a_n` where known analytically;
    /// absent for heavy-tailed families and for those with `a_n -> 0`.
    pub fn classify_exp_type(&self) -> Option<f64> {
        match *self {
            Exponential { rate } => Some(1.0 / rate),
            Gumbel { scale, .. } => Some(scale),
            _ => None,
        }
    }

    /// `E X^- = E max(-X, 0)`; closed form per family, quadrature for Gumbel.
    pub fn mean_neg_part(&self) -> f64 {
        match *self {
            Exponential { .. } | Frechet { .. } | Pareto { .. } => 0.0,
            Gaussian { mean, sd } => {
                let z = mean / sd;
                sd * normal_pdf(z) - mean * normal_tail(z)
            }
            Gumbel { loc, scale } => {
                // E X^- = int_0^inf F(-t) dt with doubly exponential decay.
                let f = |t: f64| (-((t + loc) / scale).exp()).exp();
                let upper = (scale * 40.0_f64.ln() - loc).max(0.0) + 1.0;
                adaptive_simpson(f, 0.0, upper, 1e-12)
            }
            Uniform { a, b } => {
                if a >= 0.0 {
                    0.0
                } else if b <= 0.0 {
                    -(a + b) / 2.0
                } else {
                    a * a / (2.0 * (b - a))
                }
            }
            WeibullNeg { shape } => log_gamma(1.0 + 1.0 / shape).exp(),
            Degenerate { value } => (-value).max(0.0),
        }
    }

    /// Evaluates the Potter envelope on a log-spaced grid over `(0, x0)^2`
    /// spanning six decades below `x0`, reporting every violating pair.
    pub fn potter_check(
        &self,
        a: f64,
        delta: f64,
        x0: f64,
        grid_size: usize,
    ) -> Result<PotterReport> {
        if !(a > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "potter A must be > 1, got {a}"
            )));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "potter delta must be > 0, got {delta}"
            )));
        }
        if !(x0 > 0.0 && x0 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "potter x0 must lie in (0, 1], got {x0}"
            )));
        }
        if grid_size < 2 {
            return Err(Error::InvalidParameter(
                "potter grid needs at least 2 points".into(),
            ));
        }

        let decades = 6.0 * std::f64::consts::LN_10;
        let points: Vec<f64> = (0..grid_size)
            .map(|i| x0 * (-decades * i as f64 / (grid_size - 1) as f64).exp())
            .collect();
        let g: Vec<f64> = points.iter().map(|&p| self.upper_quantile_raw(p)).collect();
        for (&p, &gp) in points.iter().zip(&g) {
            if !(gp > 0.0 && gp.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "upper quantile not positive/finite at p = {p}; Potter check needs g > 0 on (0, x0)"
                )));
            }
        }

        let mut violations = Vec::new();
        for (i, &x) in points.iter().enumerate() {
            for (j, &y) in points.iter().enumerate() {
                let ratio = g[i] / g[j];
                let r = x / y;
                let bound = a * r.powf(delta).max(r.powf(-delta));
                if ratio > bound {
                    violations.push(PotterViolation { x, y, ratio, bound });
                }
            }
        }
        Ok(PotterReport {
            a,
            delta,
            x0,
            grid_size,
            pairs_checked: grid_size * grid_size,
            violations,
        })
    }
}

// int_t^inf (1 - e^{-x^{-alpha}}) dx for t > 0, alpha > 1, via the
// substitution y = x^{-alpha}: (1/alpha) * int_0^{t^{-alpha}}
// (1 - e^{-y}) y^{-1/alpha - 1} dy, with a power-series head at 0, adaptive
// quadrature in the middle, and an analytic envelope beyond y = 50 where
// 1 - e^{-y} is 1 to machine precision.
fn frechet_tail_integral(alpha: f64, t: f64) -> f64 {
    let inv = 1.0 / alpha;
    let upper = t.powf(-alpha);
    let head_end = upper.min(0.5);

    // Series: sum_k (-1)^{k+1} e^{k - 1/alpha} / (k! (k - 1/alpha)).
    let mut series = 0.0;
    let mut factorial = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        factorial *= kf;
        let term = (-1.0_f64).powi(k + 1) * head_end.powf(kf - inv) / (factorial * (kf - inv));
        series += term;
        if term.abs() < 1e-16 * series.abs() {
            break;
        }
    }

    let mut total = series;
    if upper > 0.5 {
        let mid_end = upper.min(50.0);
        let f = |y: f64| (-(-y).exp_m1()) * y.powf(-inv - 1.0);
        let coarse = adaptive_simpson(f, 0.5, mid_end, 1e-6);
        total += adaptive_simpson(f, 0.5, mid_end, 1e-11 * coarse.abs().max(1e-9));
        if upper > 50.0 {
            // Integrand is y^{-1/alpha - 1} beyond 50 up to e^{-50}.
            total += alpha * (50.0_f64.powf(-inv) - upper.powf(-inv));
        }
    }
    total * inv
}

/// Materializes an `n x m` matrix of i.i.d. draws, row-major draw order.
pub fn sample_matrix(
    spec: &DistributionSpec,
    n: usize,
    m: usize,
    rng: &mut impl RngCore,
) -> Result<CostMatrix> {
    let entries: Vec<f64> = (0..n * m).map(|_| spec.sample(rng)).collect();
    CostMatrix::new(n, m, entries)
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Exponential { rate } => write!(f, "exponential:{rate}"),
            Gaussian { mean, sd } => write!(f, "gaussian:{mean},{sd}"),
            Gumbel { loc, scale } => write!(f, "gumbel:{loc},{scale}"),
            Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            Frechet { shape } => write!(f, "frechet:{shape}"),
            WeibullNeg { shape } => write!(f, "weibull_neg:{shape}"),
            Pareto { shape } => write!(f, "pareto:{shape}"),
            Degenerate { value } => write!(f, "degenerate:{value}"),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses the `family:param1[,param2]` spelling, e.g. `exponential:1`
    /// or `gaussian:0,1`.
    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = s.split_once(':').ok_or_else(|| {
            Error::InvalidParameter(format!(
                "distribution must be spelled family:params, got {s:?}"
            ))
        })?;
        let values: Vec<f64> = params
            .split(',')
            .map(|p| {
                p.trim().parse::<f64>().map_err(|_| {
                    Error::InvalidParameter(format!("cannot parse parameter {p:?} in {s:?}"))
                })
            })
            .collect::<Result<_>>()?;
        let want = |k: usize| -> Result<()> {
            if values.len() != k {
                Err(Error::InvalidParameter(format!(
                    "{family} takes {k} parameter(s), got {}",
                    values.len()
                )))
            } else {
                Ok(())
            }
        };
        match family {
            "exponential" => {
                want(1)?;
                Self::exponential(values[0])
            }
            "gaussian" => {
                want(2)?;
                Self::gaussian(values[0], values[1])
            }
            "gumbel" => {
                want(2)?;
                Self::gumbel(values[0], values[1])
            }
            "uniform" => {
                want(2)?;
                Self::uniform(values[0], values[1])
            }
            "frechet" => {
                want(1)?;
                Self::frechet(values[0])
            }
            "weibull_neg" => {
                want(1)?;
                Self::weibull_neg(values[0])
            }
            "pareto" => {
                want(1)?;
                Self::pareto(values[0])
            }
            "degenerate" => {
                want(1)?;
                Self::degenerate(values[0])
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown distribution family {other:?}"
            ))),
        }
    }
}

impl Serialize for DistributionSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DistributionSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Mean of the standard Gumbel law (also the digamma value at 1, negated).
pub const GUMBEL_MEAN: f64 = EULER_GAMMA;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, DOMAIN_TRIAL};

    fn exp1() -> DistributionSpec {
        DistributionSpec::exponential(1.0).unwrap()
    }

    fn all_families() -> Vec<DistributionSpec> {
        vec![
            exp1(),
            DistributionSpec::exponential(2.0).unwrap(),
            DistributionSpec::gaussian(0.0, 1.0).unwrap(),
            DistributionSpec::gaussian(-1.0, 2.5).unwrap(),
            DistributionSpec::gumbel(0.0, 1.0).unwrap(),
            DistributionSpec::gumbel(1.0, 0.5).unwrap(),
            DistributionSpec::uniform(0.0, 1.0).unwrap(),
            DistributionSpec::uniform(-2.0, 3.0).unwrap(),
            DistributionSpec::frechet(2.0).unwrap(),
            DistributionSpec::weibull_neg(1.5).unwrap(),
            DistributionSpec::pareto(2.0).unwrap(),
        ]
    }

    #[test]
    fn quantile_examples() {
        let u = 1.0 - (-1.0_f64).exp();
        assert!((exp1().quantile(u) - 1.0).abs() < 1e-14);

        let unif = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!((unif.quantile(0.3) - 0.3).abs() < 1e-15);

        let gum = DistributionSpec::gumbel(0.0, 1.0).unwrap();
        assert!(gum.quantile((-1.0_f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn tail_examples() {
        assert_eq!(exp1().tail(0.0), 1.0);
        assert!((exp1().tail(2.0_f64.ln()) - 0.5).abs() < 1e-15);
        let unif = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!((unif.tail(0.75) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn upper_quantile_examples() {
        assert!((exp1().upper_quantile(1.0 / std::f64::consts::E).unwrap() - 1.0).abs() < 1e-14);
        let unif = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!((unif.upper_quantile(0.25).unwrap() - 0.75).abs() < 1e-15);
        let gauss = DistributionSpec::gaussian(0.0, 1.0).unwrap();
        assert_eq!(gauss.upper_quantile(0.5).unwrap(), 0.0);
        assert!(matches!(
            exp1().upper_quantile(0.0),
            Err(Error::QuantileOutOfRange(_))
        ));
        assert!(matches!(
            exp1().upper_quantile(1.5),
            Err(Error::QuantileOutOfRange(_))
        ));
    }

    #[test]
    fn upper_quantile_inf_characterization() {
        // tail(g(p)) >= p and tail just above g(p) drops below p.
        for spec in all_families() {
            for &p in &[0.9, 0.5, 0.1, 0.01, 1e-4] {
                let g = spec.upper_quantile(p).unwrap();
                assert!(
                    spec.tail(g) >= p - 1e-12,
                    "{spec}: tail(g({p})) = {} < {p}",
                    spec.tail(g)
                );
                let above = g + 1e-6 * g.abs().max(1.0);
                assert!(
                    spec.tail(above) < p,
                    "{spec}: tail({above}) = {} not < {p}",
                    spec.tail(above)
                );
            }
        }
    }

    #[test]
    fn tail_is_nonincreasing_with_unit_range() {
        for spec in all_families() {
            let mut prev = f64::INFINITY;
            let mut t = -20.0;
            while t <= 20.0 {
                let tail = spec.tail(t);
                assert!((0.0..=1.0).contains(&tail), "{spec}: tail({t}) = {tail}");
                assert!(tail <= prev + 1e-15, "{spec}: tail increased at t={t}");
                prev = tail;
                t += 0.125;
            }
        }
    }

    #[test]
    fn upper_quantile_nonincreasing_in_p() {
        for spec in all_families() {
            let grid: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
            let mut prev = f64::INFINITY;
            for &p in &grid {
                let g = spec.upper_quantile(p).unwrap();
                assert!(g <= prev + 1e-12, "{spec}: g not nonincreasing at p={p}");
                prev = g;
            }
        }
    }

    #[test]
    fn closed_form_matches_bisection() {
        for spec in all_families() {
            for &p in &[0.75, 0.5, 0.2, 0.05, 1e-3, 1e-6] {
                let exact = spec.upper_quantile(p).unwrap();
                let bisect = spec.upper_quantile_bisect(p).unwrap();
                let tol = 1e-9 * exact.abs().max(1.0);
                assert!(
                    (exact - bisect).abs() <= tol,
                    "{spec} at p={p}: exact {exact} vs bisect {bisect}"
                );
            }
        }
    }

    #[test]
    fn exponential_unit_identities() {
        let spec = exp1();
        for &p in &[0.9, 0.5, 0.1, 1e-3] {
            assert!((spec.upper_quantile(p).unwrap() + p.ln()).abs() < 1e-14);
        }
        for &t in &[0.0, 1.0, 3.0, 10.0] {
            assert_eq!(spec.mean_residual(t).unwrap(), 1.0);
        }
        assert_eq!(spec.classify_exp_type(), Some(1.0));
    }

    #[test]
    fn mean_residual_examples() {
        assert!((exp1().mean_residual(3.0).unwrap() - 1.0).abs() < 1e-14);
        let unif = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!((unif.mean_residual(0.5).unwrap() - 0.25).abs() < 1e-14);
        let exp2 = DistributionSpec::exponential(2.0).unwrap();
        assert!((exp2.mean_residual(0.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn mean_residual_error_paths() {
        let unif = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!(matches!(unif.mean_residual(1.0), Err(Error::ZeroTail(_))));
        let heavy = DistributionSpec::frechet(1.0).unwrap();
        assert!(matches!(
            heavy.mean_residual(1.0),
            Err(Error::DivergentIntegral(_))
        ));
        let pareto1 = DistributionSpec::pareto(1.0).unwrap();
        assert!(matches!(
            pareto1.mean_residual(2.0),
            Err(Error::DivergentIntegral(_))
        ));
        let wn = DistributionSpec::weibull_neg(1.0).unwrap();
        assert!(matches!(wn.mean_residual(0.0), Err(Error::ZeroTail(_))));
    }

    #[test]
    fn mean_residual_numeric_families_match_quadrature_oracle() {
        // Independent oracle: composite midpoint rule on the raw tail with
        // Richardson-style refinement, nothing shared with the library path.
        let oracle = |spec: &DistributionSpec, t: f64, upper: f64| -> f64 {
            let mut best = 0.0;
            for &steps in &[20_000usize, 40_000] {
                let h = (upper - t) / steps as f64;
                let mut sum = 0.0;
                for i in 0..steps {
                    sum += spec.tail(t + (i as f64 + 0.5) * h);
                }
                best = sum * h;
            }
            best / spec.tail(t)
        };

        let gum = DistributionSpec::gumbel(0.0, 1.0).unwrap();
        for &t in &[-1.0, 0.0, 1.0, 3.0] {
            let h = gum.mean_residual(t).unwrap();
            let ref_h = oracle(&gum, t, 45.0);
            assert!((h - ref_h).abs() < 1e-6, "gumbel h({t}) = {h} vs {ref_h}");
        }

        // Heavy tail: integrate finely to 100, then the power-law remainder.
        let fre = DistributionSpec::frechet(2.5).unwrap();
        for &t in &[0.5, 1.0, 4.0] {
            let h = fre.mean_residual(t).unwrap();
            let steps = 400_000usize;
            let upper = 100.0;
            let hstep = (upper - t) / steps as f64;
            let mut sum = 0.0;
            for i in 0..steps {
                sum += fre.tail(t + (i as f64 + 0.5) * hstep);
            }
            let remainder = upper.powf(-1.5) / 1.5;
            let ref_h = (sum * hstep + remainder) / fre.tail(t);
            assert!(
                (h - ref_h).abs() < 1e-5 * ref_h.abs(),
                "frechet h({t}) = {h} vs {ref_h}"
            );
        }

        let wn = DistributionSpec::weibull_neg(1.5).unwrap();
        for &t in &[-2.0, -0.5] {
            let h = wn.mean_residual(t).unwrap();
            let ref_h = oracle(&wn, t, 0.0);
            assert!((h - ref_h).abs() < 1e-6, "weibull h({t}) = {h} vs {ref_h}");
        }
    }

    #[test]
    fn norming_constants_examples() {
        let nc = exp1().norming_constants(100).unwrap();
        assert!((nc.b_n - 100.0_f64.ln()).abs() < 1e-12);
        assert!((nc.a_n - 1.0).abs() < 1e-12);

        let exp2 = DistributionSpec::exponential(2.0).unwrap();
        let nc = exp2.norming_constants(10).unwrap();
        assert!((nc.b_n - 10.0_f64.ln() / 2.0).abs() < 1e-12);
        assert!((nc.a_n - 0.5).abs() < 1e-12);

        // Gumbel closed form for b_n cross-checked against bisection.
        let gum = DistributionSpec::gumbel(0.0, 1.0).unwrap();
        let nc = gum.norming_constants(3).unwrap();
        let bisect = gum.upper_quantile_bisect(1.0 / 3.0).unwrap();
        assert!((nc.b_n - bisect).abs() < 1e-9);
        assert!(nc.a_n > 0.0);

        let gauss = DistributionSpec::gaussian(0.0, 1.0).unwrap();
        assert!(matches!(
            gauss.norming_constants(10),
            Err(Error::HypothesisNotSatisfied(_))
        ));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(exp1().classify_exp_type(), Some(1.0));
        assert_eq!(
            DistributionSpec::gumbel(0.0, 1.0)
                .unwrap()
                .classify_exp_type(),
            Some(1.0)
        );
        assert_eq!(
            DistributionSpec::gumbel(2.0, 3.0)
                .unwrap()
                .classify_exp_type(),
            Some(3.0)
        );
        assert_eq!(
            DistributionSpec::pareto(2.0).unwrap().classify_exp_type(),
            None
        );
        assert_eq!(
            DistributionSpec::gaussian(0.0, 1.0)
                .unwrap()
                .classify_exp_type(),
            None
        );
    }

    #[test]
    fn potter_exponential_clean() {
        let report = exp1().potter_check(2.0, 0.5, 0.1, 50).unwrap();
        assert!(report.violations.is_empty());
        assert_eq!(report.pairs_checked, 2500);
    }

    #[test]
    fn potter_diagonal_never_violates() {
        // x = y gives ratio 1 <= A for any family with positive g.
        for spec in [exp1(), DistributionSpec::pareto(2.0).unwrap()] {
            let report = spec.potter_check(1.0001, 1e-9, 0.5, 40).unwrap();
            for v in &report.violations {
                assert!(v.x != v.y);
            }
        }
    }

    #[test]
    fn potter_uniform_negative_control() {
        let unif = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let report = unif.potter_check(1.01, 0.01, 0.9, 50).unwrap();
        assert!(
            !report.violations.is_empty(),
            "uniform quantile should violate a tight Potter envelope"
        );
    }

    #[test]
    fn sample_max_identities() {
        // n = 1 at u = 0.5 is the median.
        for spec in all_families() {
            assert!((spec.max_quantile(1, 0.5) - spec.quantile(0.5)).abs() < 1e-12);
        }
        // Invert (1 - e^{-t})^10 = u at t = 2.
        let u = (-((-2.0_f64).exp_m1())).powi(10);
        assert!((exp1().max_quantile(10, u) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn sample_max_distribution_ks() {
        // Empirical CDF of M_n draws against the exact (F(t))^n.
        let spec = exp1();
        let n_values = [1u64, 10, 1000];
        let samples = 100_000usize;
        // KS critical value at significance 1e-3.
        let crit = (-(0.5e-3_f64).ln() / 2.0).sqrt() / (samples as f64).sqrt();
        for &n in &n_values {
            let mut rng = substream(2024, DOMAIN_TRIAL, n, 0);
            let mut xs: Vec<f64> = (0..samples)
                .map(|_| spec.sample_max(n, &mut rng).unwrap())
                .collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let cdf = |t: f64| spec.cdf(t).powi(n as i32);
            let d = crate::stats::ks_statistic(&xs, cdf);
            assert!(d < crit, "KS {d} >= {crit} at n={n}");
        }
        // Looser documented check at n = 50.
        let mut rng = substream(2024, DOMAIN_TRIAL, 50, 0);
        let mut xs: Vec<f64> = (0..samples)
            .map(|_| spec.sample_max(50, &mut rng).unwrap())
            .collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let d = crate::stats::ks_statistic(&xs, |t| spec.cdf(t).powi(50));
        assert!(d < 0.01);
    }

    #[test]
    fn mean_neg_part_matches_quadrature() {
        // Independent oracle: E X^- = int_0^inf F(-t) dt by midpoint rule.
        let oracle = |spec: &DistributionSpec, upper: f64| {
            let steps = 400_000usize;
            let h = upper / steps as f64;
            (0..steps)
                .map(|i| spec.cdf(-(i as f64 + 0.5) * h))
                .sum::<f64>()
                * h
        };
        let gauss = DistributionSpec::gaussian(0.0, 1.0).unwrap();
        let exact = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((gauss.mean_neg_part() - exact).abs() < 1e-9);
        assert!((oracle(&gauss, 40.0) - exact).abs() < 1e-9);

        let gum = DistributionSpec::gumbel(0.0, 1.0).unwrap();
        assert!((gum.mean_neg_part() - oracle(&gum, 30.0)).abs() < 1e-7);

        assert_eq!(exp1().mean_neg_part(), 0.0);
        let wn = DistributionSpec::weibull_neg(2.0).unwrap();
        assert!((wn.mean_neg_part() - oracle(&wn, 50.0)).abs() < 1e-6);
    }

    #[test]
    fn spec_string_round_trip() {
        for spec in all_families() {
            let s = spec.to_string();
            let parsed: DistributionSpec = s.parse().unwrap();
            assert_eq!(parsed, spec, "round trip failed for {s}");
        }
        assert!("exponential:0".parse::<DistributionSpec>().is_err());
        assert!("uniform:1,0".parse::<DistributionSpec>().is_err());
        assert!("nope:1".parse::<DistributionSpec>().is_err());
        assert!("exponential".parse::<DistributionSpec>().is_err());
    }

    #[test]
    fn degenerate_family() {
        let point = DistributionSpec::degenerate(1.0).unwrap();
        let mut rng = substream(1, DOMAIN_TRIAL, 0, 0);
        assert_eq!(point.sample(&mut rng), 1.0);
        assert_eq!(point.upper_quantile(0.3).unwrap(), 1.0);
        assert_eq!(point.upper_quantile(1.0).unwrap(), 1.0);
        assert_eq!(point.tail(1.0), 1.0);
        assert_eq!(point.tail(1.0 + 1e-12), 0.0);
    }
}
