//! Independent oracles shared by the integration suites. Nothing here calls
//! the code path it is used to check: the rate oracle maximizes by search
//! where the library solves a stationarity equation, and the log-gamma
//! oracle sums a zeta-weighted Taylor series where the library uses a
//! Lanczos kernel.

#![allow(dead_code)]

use rasp_core::evt::gumbel_cgf;

/// Legendre transform of the centered-Gumbel CGF by dense grid search plus
/// golden-section refinement; uses only CGF evaluations.
pub fn rate_grid_oracle(r: f64) -> f64 {
    let objective = |t: f64| t * r - gumbel_cgf(t).finite().expect("t < 1");
    let lo = -64.0;
    let hi = 1.0 - 1e-9;
    let points = 10_000usize;
    let at = |i: usize| lo + (hi - lo) * i as f64 / points as f64;

    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=points {
        let v = objective(at(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }

    // Golden-section maximization on the bracketing cell pair.
    let mut a = at(best_i.saturating_sub(1));
    let mut b = at((best_i + 1).min(points));
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    for _ in 0..200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
        if (b - a).abs() < 1e-14 {
            break;
        }
    }
    objective(0.5 * (a + b))
}

// Riemann zeta at integer k >= 2 by direct summation with an
// Euler-Maclaurin tail.
fn zeta(k: u32) -> f64 {
    let j_max = 200u64;
    let kf = k as f64;
    let mut sum = 0.0;
    for j in 1..=j_max {
        sum += (j as f64).powi(-(k as i32));
    }
    let j = j_max as f64;
    sum + j.powf(1.0 - kf) / (kf - 1.0) - 0.5 * j.powf(-kf) + kf / 12.0 * j.powf(-kf - 1.0)
        - kf * (kf + 1.0) * (kf + 2.0) / 720.0 * j.powf(-kf - 3.0)
}

/// `ln Gamma(1 + x)` for `|x| < 1` from the Taylor series
/// `-gamma*x + sum_{k>=2} (-1)^k zeta(k) x^k / k`, truncated at 50 terms.
pub fn log_gamma_series_oracle(one_plus_x: f64) -> f64 {
    let x = one_plus_x - 1.0;
    assert!(x.abs() < 1.0, "series oracle needs |x| < 1");
    let gamma = 0.577_215_664_901_532_9;
    let mut sum = -gamma * x;
    let mut x_pow = x;
    for k in 2..=50u32 {
        x_pow *= x;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * zeta(k) * x_pow / k as f64;
    }
    sum
}

/// `pi^2 / 6` by series: `sum k^-2` plus the integral tail correction.
pub fn basel_series_oracle() -> f64 {
    let k_max = 1_000_000u64;
    let mut sum = 0.0;
    for k in 1..=k_max {
        let kf = k as f64;
        sum += 1.0 / (kf * kf);
    }
    let j = k_max as f64;
    sum + 1.0 / j - 0.5 / (j * j)
}
