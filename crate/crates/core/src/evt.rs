//! Extreme-value analytics.
//!
//! The centered Gumbel law drives the exponential tail bounds for the
//! assignment maximum: its cumulant generating function is
//! `L(t) = ln G(1-t) - gamma*t` for `t < 1` (infinite beyond), and the
//! large-deviation rate is the Legendre transform
//! `L*(r) = sup_t (t*r - L(t))`, computed here by solving the stationarity
//! condition `-psi(1-t) - gamma = r` with a safeguarded Newton iteration.
//!
//! Also here: log-gamma and digamma (implemented in-repo, nothing is assumed
//! of the host math library), the three max-stable laws with their moment
//! identities, and the rectangularity correction
//! `eps(m, n) = g(1/m) - (1/n) * sum_k g(1/(m-n+k))`.

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::rng::unit_open;
use crate::special;
use crate::{Error, Result};

/// Euler-Mascheroni constant; the mean of the standard Gumbel law.
pub const EULER_GAMMA: f64 = special::EULER_GAMMA;

/// `ln Gamma(x)` for `x > 0`, relative error below 1e-13 (Lanczos g = 7 with
/// nine coefficients; upward recurrence below 0.5, no reflection needed).
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    Ok(special::log_gamma(x))
}

/// Digamma `psi(x)` for `x > 0`, absolute error below 1e-12 (recurrence into
/// the asymptotic regime, then the Bernoulli series).
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    Ok(special::digamma(x))
}

/// Value of a cumulant generating function, with the infinite branch kept out
/// of floating arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CgfValue {
    Finite(f64),
    Infinite,
}

impl CgfValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            CgfValue::Finite(v) => Some(v),
            CgfValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, CgfValue::Infinite)
    }
}

fn cgf_finite(t: f64) -> f64 {
    debug_assert!(t < 1.0);
    special::log_gamma(1.0 - t) - EULER_GAMMA * t
}

/// Log-MGF of the centered Gumbel law: `ln Gamma(1-t) - gamma*t` for `t < 1`,
/// infinite for `t >= 1`.
pub fn gumbel_cgf(t: f64) -> CgfValue {
    if t >= 1.0 {
        CgfValue::Infinite
    } else {
        CgfValue::Finite(cgf_finite(t))
    }
}

/// One point of the rate function: `lambda_star = L*(r)` attained at
/// `t_star < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub lambda_star: f64,
    pub t_star: f64,
}

/// Legendre transform of the centered-Gumbel CGF at `r`.
///
/// Solves `L'(t) = -psi(1-t) - gamma = r`; the derivative is strictly
/// increasing from -inf (t -> -inf) to +inf (t -> 1-), so the maximizer is
/// unique. Newton steps use the trigamma derivative and fall back to
/// bisection whenever they leave the bracket.
pub fn gumbel_rate(r: f64) -> Result<RatePoint> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "rate function needs finite r, got {r}"
        )));
    }
    if r == 0.0 {
        return Ok(RatePoint {
            lambda_star: 0.0,
            t_star: 0.0,
        });
    }

    let slope = |t: f64| -special::digamma(1.0 - t) - EULER_GAMMA;
    let mut lo;
    let mut hi;
    if r > 0.0 {
        lo = 0.0;
        hi = 1.0 - 1e-12;
        if slope(hi) < r {
            return Err(Error::Unbracketable(r));
        }
    } else {
        hi = 0.0;
        let mut t = -1.0;
        while slope(t) > r {
            t *= 2.0;
            if t < -1e12 {
                return Err(Error::Unbracketable(r));
            }
        }
        lo = t;
    }

    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = slope(t) - r;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let deriv = special::trigamma(1.0 - t);
        let mut next = t - f / deriv;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t.abs().max(1.0) {
            t = next;
            break;
        }
        t = next;
    }

    let mut lambda_star = t * r - cgf_finite(t);
    // The transform is nonnegative by convexity; clip roundoff dust.
    if lambda_star < 0.0 && lambda_star > -1e-12 {
        lambda_star = 0.0;
    }
    Ok(RatePoint {
        lambda_star,
        t_star: t,
    })
}

/// Tabulated rate function on an inclusive uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFunctionTable {
    pub grid_r: Vec<f64>,
    pub lambda_star: Vec<f64>,
    pub maximizer_t: Vec<f64>,
    pub gamma_const: f64,
}

/// Evaluates the rate function on `r_min, r_min + step, ..., r_max`
/// (inclusive). Grid values within a step's worth of rounding of zero are
/// snapped to exactly zero so the `L*(0) = 0` row is exact.
pub fn rate_function_table(r_min: f64, r_max: f64, step: f64) -> Result<RateFunctionTable> {
    if !(step > 0.0 && r_min.is_finite() && r_max.is_finite() && r_min <= r_max) {
        return Err(Error::InvalidParameter(format!(
            "rate table needs r_min <= r_max and step > 0, got [{r_min}, {r_max}] step {step}"
        )));
    }
    let count = ((r_max - r_min) / step + 1e-9).floor() as usize + 1;
    let mut grid_r = Vec::with_capacity(count);
    let mut lambda_star = Vec::with_capacity(count);
    let mut maximizer_t = Vec::with_capacity(count);
    for i in 0..count {
        let mut r = r_min + i as f64 * step;
        // Decimal grids accumulate binary dust (-0.2 + 3*0.1 != 0.1); snap
        // to the 1e-10 lattice so tabulated arguments read as requested.
        if step >= 1e-8 {
            r = (r * 1e10).round() / 1e10;
        }
        if r.abs() < 1e-9 * step {
            r = 0.0;
        }
        let point = gumbel_rate(r)?;
        grid_r.push(r);
        lambda_star.push(point.lambda_star);
        maximizer_t.push(point.t_star);
    }
    Ok(RateFunctionTable {
        grid_r,
        lambda_star,
        maximizer_t,
        gamma_const: EULER_GAMMA,
    })
}

// ---------------------------------------------------------------------------
// The three max-stable laws.
// ---------------------------------------------------------------------------

/// Standard Gumbel CDF `exp(-exp(-r))`.
pub fn gumbel_cdf(r: f64) -> f64 {
    (-(-r).exp()).exp()
}

/// Standard Gumbel quantile at `u` in (0, 1).
pub fn gumbel_quantile(u: f64) -> f64 {
    -(-u.ln()).ln()
}

/// One standard Gumbel variate by inverse CDF.
pub fn gumbel_sample(rng: &mut impl RngCore) -> f64 {
    gumbel_quantile(unit_open(rng))
}

fn check_shape(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "shape parameter must be positive, got {alpha}"
        )));
    }
    Ok(alpha)
}

/// Frechet CDF with shape `alpha`: 0 for `r <= 0`, `exp(-r^-alpha)` above.
pub fn frechet_cdf(alpha: f64, r: f64) -> Result<f64> {
    check_shape(alpha)?;
    Ok(if r <= 0.0 {
        0.0
    } else {
        (-r.powf(-alpha)).exp()
    })
}

/// Frechet quantile at `u` in (0, 1).
pub fn frechet_quantile(alpha: f64, u: f64) -> Result<f64> {
    check_shape(alpha)?;
    Ok((-u.ln()).powf(-1.0 / alpha))
}

pub fn frechet_sample(alpha: f64, rng: &mut impl RngCore) -> Result<f64> {
    frechet_quantile(alpha, unit_open(rng))
}

/// Weibull (negative) CDF with shape `alpha`: `exp(-(-r)^alpha)` for
/// `r <= 0`, 1 above.
pub fn weibull_cdf(alpha: f64, r: f64) -> Result<f64> {
    check_shape(alpha)?;
    Ok(if r > 0.0 {
        1.0
    } else {
        (-(-r).powf(alpha)).exp()
    })
}

/// Weibull quantile at `u` in (0, 1).
pub fn weibull_quantile(alpha: f64, u: f64) -> Result<f64> {
    check_shape(alpha)?;
    Ok(-(-u.ln()).powf(1.0 / alpha))
}

pub fn weibull_sample(alpha: f64, rng: &mut impl RngCore) -> Result<f64> {
    weibull_quantile(alpha, unit_open(rng))
}

/// `E Phi_alpha^k = Gamma(1 - k/alpha)` for `0 < k < alpha`.
pub fn frechet_moment(alpha: f64, k: f64) -> Result<f64> {
    check_shape(alpha)?;
    if !(k > 0.0 && k < alpha) {
        return Err(Error::MomentOutOfRange { k, alpha });
    }
    Ok(special::log_gamma(1.0 - k / alpha).exp())
}

/// `E (-Psi_alpha)^k = Gamma(1 + k/alpha)` for `k > 0`.
pub fn weibull_moment(alpha: f64, k: f64) -> Result<f64> {
    check_shape(alpha)?;
    if !(k > 0.0) {
        return Err(Error::MomentOutOfRange { k, alpha });
    }
    Ok(special::log_gamma(1.0 + k / alpha).exp())
}

// ---------------------------------------------------------------------------
// Rectangularity correction.
// ---------------------------------------------------------------------------

/// One schedule point of the rectangularity correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonPoint {
    pub n: u64,
    pub m: u64,
    pub epsilon: f64,
}

/// The correction at a point, optionally along a schedule, with finite
/// proxies for its lower/upper limits taken over the trailing half of the
/// schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub n: u64,
    pub m: u64,
    pub epsilon: f64,
    pub sequence_values: Option<Vec<EpsilonPoint>>,
    pub eps_inf: f64,
    pub eps_sup: f64,
}

/// `eps(m, n) = g(1/m) - (1/n) * sum_{k=1}^{n} g(1/(m-n+k))`, the exact
/// finite sum. Nonnegative whenever `g` is nonincreasing. Errors when `g` is
/// not finite at one of the arguments (e.g. `g(1)` for families unbounded
/// below).
pub fn epsilon(spec: &DistributionSpec, n: u64, m: u64) -> Result<f64> {
    if n < 1 || n > m {
        return Err(Error::DimensionMismatch(format!(
            "epsilon needs 1 <= n <= m, got n={n}, m={m}"
        )));
    }
    let p_m = 1.0 / m as f64;
    let g_m = spec.upper_quantile(p_m)?;
    if !g_m.is_finite() {
        return Err(Error::QuantileUndefined(p_m));
    }
    let mut sum = 0.0;
    for k in 1..=n {
        let p = 1.0 / (m - n + k) as f64;
        let g = spec.upper_quantile(p)?;
        if !g.is_finite() {
            return Err(Error::QuantileUndefined(p));
        }
        sum += g;
    }
    Ok(g_m - sum / n as f64)
}

/// Single-point report; the inf/sup proxies coincide with the value.
pub fn epsilon_report(spec: &DistributionSpec, n: u64, m: u64) -> Result<EpsilonReport> {
    let eps = epsilon(spec, n, m)?;
    Ok(EpsilonReport {
        n,
        m,
        epsilon: eps,
        sequence_values: None,
        eps_inf: eps,
        eps_sup: eps,
    })
}

/// Schedule report: evaluates every `(n, m)` pair and takes `eps_inf` /
/// `eps_sup` as min/max over the trailing half of the schedule, a finite
/// stand-in for the liminf/limsup along `m(n)`.
pub fn epsilon_schedule(spec: &DistributionSpec, schedule: &[(u64, u64)]) -> Result<EpsilonReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidConfig("epsilon schedule is empty".into()));
    }
    let mut points = Vec::with_capacity(schedule.len());
    for &(n, m) in schedule {
        points.push(EpsilonPoint {
            n,
            m,
            epsilon: epsilon(spec, n, m)?,
        });
    }
    let tail_start = points.len() / 2;
    let tail = &points[tail_start..];
    let eps_inf = tail.iter().map(|p| p.epsilon).fold(f64::INFINITY, f64::min);
    let eps_sup = tail
        .iter()
        .map(|p| p.epsilon)
        .fold(f64::NEG_INFINITY, f64::max);
    let last = *points.last().expect("schedule nonempty");
    Ok(EpsilonReport {
        n: last.n,
        m: last.m,
        epsilon: last.epsilon,
        sequence_values: Some(points),
        eps_inf,
        eps_sup,
    })
}
