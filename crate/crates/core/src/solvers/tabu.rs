//! Tabu search: single-flip local search that escapes local minima by
//! temporarily banning recently flipped variables.

use super::evaluator::Workspace;
use super::{collate, SampleSet, SolverConfig};
use crate::qubo::QuboModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

/// Runs `config.reads` independent tabu walks from seeded random starts and
/// aggregates the best vector found by each.
///
/// Per iteration the best admissible flip is taken even when it worsens the
/// energy; a variable is inadmissible for `tenure` iterations after being
/// flipped unless flipping it would beat the read's best (aspiration). A
/// read stops after `4·n_vars` iterations without improvement, or at
/// `config.max_iters` when set.
pub fn tabu_search(model: &QuboModel, config: &SolverConfig) -> SampleSet {
    config.check().expect("tabu_search requires a valid config");
    let started = Instant::now();
    let ws = Workspace::new(model);
    let finals: Vec<Vec<bool>> = (0..config.reads)
        .into_par_iter()
        .map(|read| run_read(model, &ws, config, read as u64))
        .collect();
    collate("tabu_search", model, Some(config.clone()), finals, started)
}

fn run_read(model: &QuboModel, ws: &Workspace, config: &SolverConfig, read: u64) -> Vec<bool> {
    let n = model.n_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(read);
    let start: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let mut state = ws.init(start);

    let mut best_bits = state.bits.clone();
    let mut best_energy = state.energy;
    // tabu_until[v] > current iteration counter means v is banned.
    let mut tabu_until = vec![0u64; n];
    let stall_budget = 4 * n as u64;
    let max_iters = config.max_iters.unwrap_or(u64::MAX);

    let mut iter = 0u64;
    let mut stall = 0u64;
    while stall < stall_budget && iter < max_iters {
        let mut choice: Option<(usize, f64)> = None;
        for v in 0..n {
            let d = ws.delta(&state, v);
            let banned = iter < tabu_until[v];
            let aspirates = state.energy + d < best_energy;
            if banned && !aspirates {
                continue;
            }
            if choice.is_none_or(|(_, best)| d < best) {
                choice = Some((v, d));
            }
        }
        // Small models can have every variable banned at once; fall back to
        // the globally best flip rather than stalling on an empty move set.
        let v = match choice {
            Some((v, _)) => v,
            None => (0..n)
                .min_by(|&a, &b| ws.delta(&state, a).total_cmp(&ws.delta(&state, b)))
                .expect("models always have at least one variable"),
        };
        ws.flip(&mut state, v);
        tabu_until[v] = iter + 1 + config.tenure as u64;

        if state.energy < best_energy {
            best_energy = state.energy;
            best_bits.clone_from(&state.bits);
            stall = 0;
        } else {
            stall += 1;
        }
        iter += 1;
    }
    best_bits
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
    fn one_flip_landscape() {
        // Smallest registry (4 variables): one rewarding bit, three pinned
        // off by positive diagonals. The unique optimum is one flip away
        // from anywhere.
        let m = QuboModel::from_parts(
            VariableRegistry::new(1),
            vec![(0, 0, -1.0), (1, 1, 1.0), (2, 2, 1.0), (3, 3, 1.0)],
            0.0,
        );
        let config = SolverConfig {
            reads: 4,
            ..SolverConfig::default()
        };
        let set = tabu_search(&m, &config);
        let best = set.best().unwrap();
        assert_eq!(best.bits, vec![true, false, false, false]);
        assert_eq!(best.energy, -1.0);
        assert_eq!(set.total_occurrences(), 4);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let m = model(3);
        let config = SolverConfig {
            seed: 99,
            reads: 8,
            ..SolverConfig::default()
        };
        let a = tabu_search(&m, &config);
        let b = tabu_search(&m, &config);
        assert_eq!(a, b);
        assert_eq!(a.solver_name, "tabu_search");
    }

    #[test]
    fn recovers_the_optimum_on_the_four_debris_instance() {
        let m = model(4);
        let config = SolverConfig {
            seed: 1,
            reads: 50,
            tenure: 20,
            ..SolverConfig::default()
        };
        let set = tabu_search(&m, &config);
        assert_eq!(set.best().unwrap().energy, 10.0);
        assert_eq!(set.total_occurrences(), 50);
    }

    #[test]
    fn stored_energies_match_recomputation() {
        let m = model(3);
        let config = SolverConfig {
            seed: 5,
            reads: 20,
            ..SolverConfig::default()
        };
        let set = tabu_search(&m, &config);
        for sample in &set.samples {
            assert_eq!(sample.energy, m.energy(&sample.bits));
        }
        // Sorted ascending by energy.
        for pair in set.samples.windows(2) {
            assert!(pair[0].energy <= pair[1].energy);
        }
    }

    #[test]
    fn iteration_cap_is_honored() {
        // A tiny cap still returns a sample per read without hanging.
        let m = model(3);
        let config = SolverConfig {
            seed: 2,
            reads: 3,
            max_iters: Some(5),
            ..SolverConfig::default()
        };
        let set = tabu_search(&m, &config);
        assert_eq!(set.total_occurrences(), 3);
    }
}
