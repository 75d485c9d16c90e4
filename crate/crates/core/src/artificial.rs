//! Hand-built instance family with known optima, used for solver calibration
//! and regression tests.
//!
//! The family is anchored on a 4-debris core whose tables were chosen so the
//! feasible tours and their costs can be checked by hand. Sizes below 4 take
//! the leading block of the core; sizes above 4 pad with an alignment epoch
//! past the deadline (7.1 against t_max = 7) and prohibitive costs, so every
//! tour through an added node breaks the timing chain and the feasible set —
//! and therefore the optimum — stays identical to the 4-debris case.

use crate::instance::ProblemInstance;

const BASE_T: [[f64; 4]; 4] = [
    [0.0, 2.0, 4.0, 7.1],
    [2.0, 0.0, 6.0, 7.1],
    [4.0, 6.0, 0.0, 6.0],
    [7.1, 7.1, 6.0, 0.0],
];
const BASE_C: [[f64; 4]; 4] = [
    [0.0, 1.0, 3.0, 0.5],
    [1.0, 0.0, 2.0, 0.5],
    [3.0, 2.0, 0.0, 3.0],
    [0.5, 0.5, 3.0, 0.0],
];
const BASE_DISPOSAL: [f64; 4] = [1.0, 6.0, 1.0, 2.0];
const PAD_T: f64 = 7.1;
const PAD_COST: f64 = 10.0;

/// Builds the artificial instance with `n_t` real debris (`n_t >= 2`).
///
/// Mission parameters are fixed: deadline 7 days, servicing time 1 day, and
/// `n_s = min(n_t, 3)` debris to select.
pub fn instance(n_t: usize) -> ProblemInstance {
    assert!(n_t >= 2, "the smallest artificial instance has 2 debris");
    let n_s = n_t.min(3);
    let grow = |base: &[[f64; 4]; 4], pad: f64| -> Vec<Vec<f64>> {
        (0..n_t)
            .map(|i| {
                (0..n_t)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else if i < 4 && j < 4 {
                            base[i][j]
                        } else {
                            pad
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let disposal = (0..n_t)
        .map(|i| if i < 4 { BASE_DISPOSAL[i] } else { PAD_COST })
        .collect();
    let labels = (1..=n_t).map(|i| format!("debris-{i}")).collect();
    ProblemInstance::from_real_tables(
        n_s,
        7.0,
        1.0,
        labels,
        grow(&BASE_T, PAD_T),
        grow(&BASE_C, PAD_COST),
        disposal,
    )
    .expect("artificial tables satisfy the instance invariants")
}

/// The complete feasible tour set of `instance(n_t)` with total costs,
/// ordered cheapest first (cost ties in lexicographic sequence order).
///
/// Derived by hand from the tables: a tour is feasible iff consecutive
/// alignment epochs leave a 1-day servicing gap and the last epoch is within
/// the 7-day deadline. Padding keeps this set fixed for all `n_t >= 4`.
pub fn known_solutions(n_t: usize) -> Vec<(Vec<usize>, f64)> {
    assert!(n_t >= 2);
    match n_t {
        2 => vec![(vec![1, 2], 8.0), (vec![2, 1], 8.0)],
        3 => vec![
            (vec![1, 2, 3], 11.0),
            (vec![2, 1, 3], 12.0),
            (vec![1, 3, 2], 13.0),
        ],
        _ => vec![
            (vec![1, 3, 4], 10.0),
            (vec![1, 2, 3], 11.0),
            (vec![2, 1, 3], 12.0),
            (vec![1, 3, 2], 13.0),
        ],
    }
}
