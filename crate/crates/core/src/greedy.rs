//! Greedy assignment construction and the two-sided sandwich sampler.
//!
//! The greedy walk processes rows in order 1..n and in each row takes the
//! largest entry among the columns not yet used. Its value never exceeds the
//! exact maximum, while the sum of rowwise maxima never falls below it. The
//! sandwich sampler draws both control sums directly — each term is the
//! maximum of an independent sample, drawn in one shot from its quantile
//! function — so instances with n, m in the thousands cost O(n) per trial
//! instead of materializing an n x m matrix.

use rand_core::RngCore;

use crate::distributions::DistributionSpec;
use crate::matrix::{AssignmentResult, CostMatrix, GeneralizedPermutation, Objective};
use crate::rng::unit_open;
use crate::{Error, Result};

/// Greedy maximizing assignment: row order 1..n, in each row the maximum over
/// unused columns, ties to the lowest column index. Requires `n <= m`.
pub fn greedy_assignment(matrix: &CostMatrix) -> Result<AssignmentResult> {
    let n = matrix.rows();
    let m = matrix.cols();
    if n > m {
        return Err(Error::DimensionMismatch(format!(
            "greedy walk needs n <= m, got {n}x{m}; transpose first"
        )));
    }
    let mut used = vec![false; m];
    let mut assignment = Vec::with_capacity(n);
    let mut value = 0.0;
    for i in 0..n {
        let row = matrix.row(i);
        let mut best: Option<(usize, f64)> = None;
        for (j, &x) in row.iter().enumerate() {
            if used[j] {
                continue;
            }
            // Strict improvement keeps the lowest column among ties.
            if best.is_none_or(|(_, b)| x > b) {
                best = Some((j, x));
            }
        }
        let (j, x) = best.expect("n <= m leaves a free column for every row");
        used[j] = true;
        assignment.push(j);
        value += x;
    }
    Ok(AssignmentResult {
        value,
        permutation: GeneralizedPermutation::new(assignment, m)
            .expect("greedy never reuses a column"),
        objective: Objective::Max,
    })
}

/// One draw of the two-sided control sums for an `n x m` instance:
///
/// - `lower`: sum over k = m-n+1..=m of independent `M_k` draws,
/// - `upper`: sum of `n` independent `M_m` draws.
///
/// Draw order is the lower terms (k ascending) then the upper terms, one
/// uniform each, so the two sums are built from disjoint positions of the
/// caller's stream and are mutually independent.
pub fn sandwich_sample(
    spec: &DistributionSpec,
    n: u64,
    m: u64,
    rng: &mut impl RngCore,
) -> Result<(f64, f64)> {
    if n < 1 || n > m {
        return Err(Error::DimensionMismatch(format!(
            "sandwich needs 1 <= n <= m, got n={n}, m={m}"
        )));
    }
    let mut lower = 0.0;
    for k in (m - n + 1)..=m {
        lower += spec.max_quantile(k, unit_open(rng));
    }
    let mut upper = 0.0;
    for _ in 0..n {
        upper += spec.max_quantile(m, unit_open(rng));
    }
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{brute_force_optimum, evaluate, row_maxima_sum};
    use crate::rng::{substream, DOMAIN_TRIAL};
    use crate::stats::{harmonic, SummaryStats};

    fn mat(rows: &[&[f64]]) -> CostMatrix {
        CostMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let res = greedy_assignment(&mat(&[&[3.0, 1.0, 2.0], &[9.0, 8.0, 7.0]])).unwrap();
        assert_eq!(res.permutation.one_based(), vec![1, 2]);
        assert_eq!(res.value, 11.0);

        // Greedy takes 2 then 3, strictly below the optimum 6.
        let res = greedy_assignment(&mat(&[&[1.0, 2.0], &[3.0, 5.0]])).unwrap();
        assert_eq!(res.permutation.one_based(), vec![2, 1]);
        assert_eq!(res.value, 5.0);

        // Single row: greedy is the row maximum and hence optimal.
        let single = mat(&[&[0.5, 2.5, 1.0]]);
        let res = greedy_assignment(&single).unwrap();
        assert_eq!(res.value, 2.5);
        assert_eq!(
            res.value,
            brute_force_optimum(&single, Objective::Max).unwrap().value
        );
    }

    #[test]
    fn greedy_rejects_tall_matrices() {
        let tall = mat(&[&[1.0], &[2.0]]);
        assert!(greedy_assignment(&tall).is_err());
    }

    #[test]
    fn greedy_value_is_its_own_evaluation() {
        let m = mat(&[&[0.1, 0.9, 0.4], &[0.8, 0.85, 0.2]]);
        let res = greedy_assignment(&m).unwrap();
        assert_eq!(res.value, evaluate(&m, &res.permutation).unwrap());
    }

    #[test]
    fn greedy_optimal_on_decreasing_rows() {
        // Row k constant c_k: any injection attains sum c_k, greedy included.
        let m = mat(&[&[5.0, 5.0, 5.0], &[2.0, 2.0, 2.0], &[0.5, 0.5, 0.5]]);
        let res = greedy_assignment(&m).unwrap();
        assert_eq!(res.value, 7.5);
        assert_eq!(
            res.value,
            brute_force_optimum(&m, Objective::Max).unwrap().value
        );
    }

    #[test]
    fn greedy_chain_inequality() {
        let spec = DistributionSpec::gaussian(0.0, 1.0).unwrap();
        for trial in 0..50u64 {
            let mut rng = substream(5150, DOMAIN_TRIAL, 0, trial);
            let m = crate::distributions::sample_matrix(&spec, 4, 7, &mut rng).unwrap();
            let greedy = greedy_assignment(&m).unwrap().value;
            let exact = brute_force_optimum(&m, Objective::Max).unwrap().value;
            assert!(greedy <= exact);
            assert!(exact <= row_maxima_sum(&m));
        }
    }

    #[test]
    fn sandwich_degenerate_point() {
        // n = m = 1: both sums are a single draw of X.
        let spec = DistributionSpec::degenerate(1.0).unwrap();
        let mut rng = substream(1, DOMAIN_TRIAL, 0, 0);
        let (lower, upper) = sandwich_sample(&spec, 1, 1, &mut rng).unwrap();
        assert_eq!(lower, 1.0);
        assert_eq!(upper, 1.0);
        // Median identity for a continuous family at matched quantile level.
        let exp = DistributionSpec::exponential(1.0).unwrap();
        assert!((exp.max_quantile(1, 0.5) - exp.quantile(0.5)).abs() < 1e-15);
    }

    #[test]
    fn sandwich_expectations_match_harmonic_identities() {
        // E M_k = H_k for unit exponentials, so for n = m = 2 the control
        // sums have means H_1 + H_2 = 2.5 and 2 H_2 = 3.0.
        let spec = DistributionSpec::exponential(1.0).unwrap();
        let trials = 100_000u64;
        let mut lowers = Vec::with_capacity(trials as usize);
        let mut uppers = Vec::with_capacity(trials as usize);
        for trial in 0..trials {
            let mut rng = substream(808, DOMAIN_TRIAL, 0, trial);
            let (lo, hi) = sandwich_sample(&spec, 2, 2, &mut rng).unwrap();
            lowers.push(lo);
            uppers.push(hi);
        }
        let lo = SummaryStats::from_values(&lowers);
        let hi = SummaryStats::from_values(&uppers);
        let e_lower = harmonic(1) + harmonic(2);
        let e_upper = 2.0 * harmonic(2);
        assert!(
            (lo.mean - e_lower).abs() <= 4.0 * lo.std_error,
            "lower mean {} vs {e_lower} (se {})",
            lo.mean,
            lo.std_error
        );
        assert!(
            (hi.mean - e_upper).abs() <= 4.0 * hi.std_error,
            "upper mean {} vs {e_upper} (se {})",
            hi.mean,
            hi.std_error
        );
    }

    #[test]
    fn sandwich_rejects_bad_shapes() {
        let spec = DistributionSpec::exponential(1.0).unwrap();
        let mut rng = substream(1, DOMAIN_TRIAL, 0, 0);
        assert!(sandwich_sample(&spec, 3, 2, &mut rng).is_err());
        assert!(sandwich_sample(&spec, 0, 2, &mut rng).is_err());
    }
}
