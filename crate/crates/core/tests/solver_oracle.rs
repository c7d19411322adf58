//! Property tests for the assignment solver against the exhaustive oracle.

use proptest::prelude::*;

use rasp_core::matrix::{
    brute_force_optimum, enumerate_injections, evaluate, injection_count, row_maxima_sum,
    CostMatrix, Objective,
};
use rasp_core::solver::{solve, verify_certificate};

fn matrix_strategy() -> impl Strategy<Value = CostMatrix> {
    (1usize..=5, 0usize..=3).prop_flat_map(|(n, extra)| {
        let m = n + extra;
        prop::collection::vec(-10.0..10.0f64, n * m)
            .prop_map(move |entries| CostMatrix::new(n, m, entries).unwrap())
    })
}

// Small integer entries force massed ties, the hard case for deterministic
// path selection.
fn tied_matrix_strategy() -> impl Strategy<Value = CostMatrix> {
    (1usize..=5, 0usize..=3).prop_flat_map(|(n, extra)| {
        let m = n + extra;
        prop::collection::vec(0i8..4, n * m).prop_map(move |entries| {
            CostMatrix::new(n, m, entries.into_iter().map(f64::from).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_attains_the_brute_force_optimum(matrix in matrix_strategy()) {
        for objective in [Objective::Max, Objective::Min] {
            let (result, diag) = solve(&matrix, objective).unwrap();
            let oracle = brute_force_optimum(&matrix, objective).unwrap();
            prop_assert!(
                (result.value - oracle.value).abs() <= 1e-9,
                "{objective}: solver {} vs oracle {}", result.value, oracle.value
            );
            let attained = evaluate(&matrix, &result.permutation).unwrap();
            prop_assert!((attained - result.value).abs() <= 1e-12);
            prop_assert!(verify_certificate(&matrix, &result, &diag).unwrap());
        }
    }

    #[test]
    fn solver_is_exact_and_deterministic_under_ties(matrix in tied_matrix_strategy()) {
        for objective in [Objective::Max, Objective::Min] {
            let (first, diag) = solve(&matrix, objective).unwrap();
            let oracle = brute_force_optimum(&matrix, objective).unwrap();
            prop_assert!((first.value - oracle.value).abs() <= 1e-9);
            prop_assert!(verify_certificate(&matrix, &first, &diag).unwrap());
            // Re-solving yields the identical assignment, ties included.
            let (second, _) = solve(&matrix, objective).unwrap();
            prop_assert_eq!(first.permutation, second.permutation);
        }
    }

    #[test]
    fn negation_duality(matrix in matrix_strategy()) {
        let (max, _) = solve(&matrix, Objective::Max).unwrap();
        let (min, _) = solve(&matrix.negate(), Objective::Min).unwrap();
        prop_assert!((max.value + min.value).abs() <= 1e-9);
    }

    #[test]
    fn greedy_solve_row_maxima_chain(matrix in matrix_strategy()) {
        let greedy = rasp_core::greedy::greedy_assignment(&matrix).unwrap();
        let (exact, _) = solve(&matrix, Objective::Max).unwrap();
        prop_assert!(greedy.value <= exact.value);
        prop_assert!(exact.value <= row_maxima_sum(&matrix));
    }

    #[test]
    fn every_assignment_is_bounded_by_row_maxima(matrix in matrix_strategy()) {
        let bound = row_maxima_sum(&matrix);
        for perm in enumerate_injections(matrix.rows(), matrix.cols(), 100_000).unwrap() {
            prop_assert!(evaluate(&matrix, &perm).unwrap() <= bound + 1e-12);
        }
    }
}

#[test]
fn enumeration_count_equals_falling_factorial() {
    for m in 1..=7usize {
        for n in 1..=m {
            let seen = enumerate_injections(n, m, 10_000_000).unwrap().count();
            assert_eq!(seen as u128, injection_count(n, m), "count at n={n}, m={m}");
        }
    }
}
