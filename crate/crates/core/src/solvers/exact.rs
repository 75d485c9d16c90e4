//! Exhaustive enumeration and landscape scanning over the integer encoding
//! of bit vectors.

use super::evaluator::Workspace;
use super::{bits_of_code, Sample, SampleSet, SolverError};
use crate::qubo::QuboModel;
use std::time::Instant;

/// Hard ceiling for full enumeration: 2^26 evaluations.
const ENUMERATION_LIMIT: usize = 26;

/// Enumerates every assignment and returns all global minimizers, sorted by
/// their integer code, each with an exactly recomputed energy.
///
/// The walk follows the Gray-code order (one flip per step, incremental
/// energies), then a second pass re-collects every state within a drift
/// band of the incumbent and re-evaluates those against the model directly,
/// so accumulated floating-point error can neither miss a minimizer nor
/// admit a false one.
pub fn exhaustive_minimum(model: &QuboModel) -> Result<SampleSet, SolverError> {
    let n = model.n_vars();
    if n > ENUMERATION_LIMIT {
        return Err(SolverError::TooManyVariables {
            n_vars: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let started = Instant::now();
    let ws = Workspace::new(model);
    let total: u64 = 1 << n;

    // Pass 1: incremental minimum and the energy scale actually visited.
    let mut state = ws.init(vec![false; n]);
    let mut min_seen = state.energy;
    let mut scale = state.energy.abs();
    for m in 1..total {
        state_step(&ws, &mut state, m);
        min_seen = min_seen.min(state.energy);
        scale = scale.max(state.energy.abs());
    }

    // Worst-case linear drift bound over the walk, padded to a band that
    // cannot exclude the true minimizers.
    let band = f64::max(
        f64::EPSILON * total as f64 * scale.max(1.0) * 4.0,
        1e-9 * scale.max(1.0),
    );

    // Pass 2: candidates within the band, re-evaluated exactly.
    let mut state = ws.init(vec![false; n]);
    let mut candidates: Vec<u64> = Vec::new();
    if state.energy <= min_seen + band {
        candidates.push(0);
    }
    for m in 1..total {
        state_step(&ws, &mut state, m);
        if state.energy <= min_seen + band {
            candidates.push(m ^ (m >> 1));
        }
    }

    let exact: Vec<(u64, f64)> = candidates
        .into_iter()
        .map(|code| (code, model.energy(&bits_of_code(code, n))))
        .collect();
    let true_min = exact
        .iter()
        .map(|&(_, e)| e)
        .fold(f64::INFINITY, f64::min);
    let mut samples: Vec<Sample> = exact
        .into_iter()
        .filter(|&(_, e)| e == true_min)
        .map(|(code, energy)| Sample {
            bits: bits_of_code(code, n),
            energy,
            occurrences: 1,
        })
        .collect();
    // Candidate codes arrive in Gray-code visit order; report in integer order.
    samples.sort_by_key(|s| super::integer_code(&s.bits));
    Ok(SampleSet {
        samples,
        solver_name: "exhaustive_minimum".to_owned(),
        wall_time: started.elapsed().as_secs_f64(),
        config: None,
    })
}

/// Advances a Gray-code walk from step `m − 1` to step `m` (one flip).
fn state_step(ws: &Workspace, state: &mut super::evaluator::State, m: u64) {
    ws.flip(state, m.trailing_zeros() as usize);
}

/// Energies of the integer-encoded vectors `start, start+stride, …` below
/// `stop`, evaluated directly (no incremental drift); the series behind the
/// energy-landscape plots.
pub fn landscape_scan(
    model: &QuboModel,
    start: u64,
    stop: u64,
    stride: u64,
) -> Result<Vec<(u64, f64)>, SolverError> {
    let n = model.n_vars();
    if n > 63 {
        return Err(SolverError::TooManyVariables {
            n_vars: n,
            limit: 63,
        });
    }
    let span = 1u64 << n;
    if start >= stop || stop > span || stride == 0 {
        return Err(SolverError::InvalidScan {
            start,
            stop,
            stride,
            n_vars: n,
        });
    }
    Ok((start..stop)
        .step_by(stride as usize)
        .map(|code| (code, model.energy(&bits_of_code(code, n))))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artificial;
    use crate::qubo::{build_qubo, LagrangeWeights, QuboModel, VariableRegistry};

    fn model(n_t: usize) -> QuboModel {
        build_qubo(&artificial::instance(n_t), &LagrangeWeights::default()).unwrap()
    }

    #[test]
    fn two_debris_minimum_is_the_round_trip_in_both_orientations() {
        let set = exhaustive_minimum(&model(2)).unwrap();
        // Costs are symmetric enough on this instance that both tour
        // orientations tie at the global minimum of 8.
        assert_eq!(set.samples.len(), 2);
        for sample in &set.samples {
            assert_eq!(sample.energy, 8.0);
        }
        // Integer-code order, ascending.
        let codes: Vec<u64> = set
            .samples
            .iter()
            .map(|s| super::super::integer_code(&s.bits))
            .collect();
        assert!(codes[0] < codes[1]);
    }

    #[test]
    fn three_debris_minimum_is_eleven() {
        let set = exhaustive_minimum(&model(3)).unwrap();
        assert_eq!(set.best().unwrap().energy, 11.0);
        assert_eq!(set.samples.len(), 1);
    }

    #[test]
    fn constant_landscape_ties_everything() {
        let m = QuboModel::from_parts(VariableRegistry::new(1), vec![], 2.5);
        let set = exhaustive_minimum(&m).unwrap();
        assert_eq!(set.samples.len(), 16);
        assert!(set.samples.iter().all(|s| s.energy == 2.5));
        assert!(set.samples.iter().all(|s| s.occurrences == 1));
    }

    #[test]
    fn guard_refuses_large_models() {
        let m = model(4);
        assert!(m.n_vars() > 26);
        assert!(matches!(
            exhaustive_minimum(&m),
            Err(SolverError::TooManyVariables { limit: 26, .. })
        ));
    }

    #[test]
    fn scan_matches_direct_evaluation() {
        let m = model(2);
        let points = landscape_scan(&m, 0, 1 << 10, 1).unwrap();
        assert_eq!(points.len(), 1024);
        for &(code, energy) in points.iter().step_by(37) {
            assert_eq!(energy, m.energy(&bits_of_code(code, 10)));
        }
        // The scan's global minimum agrees with enumeration.
        let scan_min = points.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
        assert_eq!(scan_min, exhaustive_minimum(&m).unwrap().best().unwrap().energy);
    }

    #[test]
    fn strided_scan_counts() {
        let m = model(3);
        let points = landscape_scan(&m, 0, 1 << 18, 200).unwrap();
        assert_eq!(points.len(), 1311);
        assert_eq!(points[1].0, 200);
    }

    #[test]
    fn bad_ranges_are_rejected() {
        let m = model(2);
        assert!(matches!(
            landscape_scan(&m, 5, 5, 1),
            Err(SolverError::InvalidScan { .. })
        ));
        assert!(matches!(
            landscape_scan(&m, 0, (1 << 10) + 1, 1),
            Err(SolverError::InvalidScan { .. })
        ));
        assert!(matches!(
            landscape_scan(&m, 0, 10, 0),
            Err(SolverError::InvalidScan { .. })
        ));
    }
}
