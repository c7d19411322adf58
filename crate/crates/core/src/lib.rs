//! Exact maxima/minima of random assignment processes on rectangular matrices,
//! together with the analytic machinery (quantile scales, extreme-value laws,
//! large-deviation rates) and a seed-deterministic Monte Carlo harness used to
//! verify their asymptotics at desk scale.
//!
//! Layout:
//! - [`matrix`]: cost matrices, injective assignments, brute-force oracle
//! - [`solver`]: shortest-augmenting-path assignment solver with dual certificates
//! - [`distributions`]: parametric families, tails, upper quantiles, norming constants
//! - [`greedy`]: greedy assignment construction and the two-sided sandwich sampler
//! - [`evt`]: log-gamma/digamma, Gumbel cumulant generating function and its
//!   Legendre transform, extreme-value laws, the rectangularity correction
//! - [`experiments`]: Monte Carlo experiment runners with reproducible substreams
//! - [`stats`]: summary statistics, Kolmogorov-Smirnov distance, bootstrap
//!
//! All randomness flows from explicit 64-bit seeds through counter-based
//! substreams (see [`rng`]); reports are byte-identical across worker counts.

#![forbid(unsafe_code)]
// Parameter guards are written `!(x > 0.0)` so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distributions;
mod error;
pub mod evt;
pub mod experiments;
pub mod greedy;
pub mod matrix;
pub mod rng;
pub mod solver;
mod special;
pub mod stats;

pub use error::{Error, Result};
