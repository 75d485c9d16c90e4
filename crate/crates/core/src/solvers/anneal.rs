//! Simulated annealing with a geometric inverse-temperature schedule and
//! Metropolis acceptance.

use super::evaluator::Workspace;
use super::{collate, SampleSet, SolverConfig};
use crate::qubo::QuboModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

/// Runs `config.reads` annealing reads and aggregates their final vectors.
///
/// Each read starts from a seeded random vector (or `config.initial` when
/// set) and performs `config.sweeps` sweeps, proposing one flip per variable
/// in index order. A flip is accepted when its energy change is
/// nonpositive, otherwise with probability `exp(−β·ΔE)`; β follows a
/// geometric ramp between the `beta_range` bounds, derived from the model's
/// single-flip energy scale when absent.
pub fn simulated_annealing(model: &QuboModel, config: &SolverConfig) -> SampleSet {
    config.check().expect("simulated_annealing requires a valid config");
    if let Some(initial) = &config.initial {
        assert_eq!(
            initial.len(),
            model.n_vars(),
            "configured initial vector must match the model"
        );
    }
    let started = Instant::now();
    let ws = Workspace::new(model);
    let betas = beta_schedule(model, config);
    let finals: Vec<Vec<bool>> = (0..config.reads)
        .into_par_iter()
        .map(|read| run_read(model, &ws, config, &betas, read as u64, None))
        .collect();
    collate(
        "simulated_annealing",
        model,
        Some(config.clone()),
        finals,
        started,
    )
}

/// Best-so-far energy after each sweep of a single read, for inspecting
/// convergence; the trace is non-increasing by construction and the read is
/// the same one `simulated_annealing` would run at `read_index`.
pub fn anneal_trace(model: &QuboModel, config: &SolverConfig, read_index: u64) -> Vec<f64> {
    config.check().expect("anneal_trace requires a valid config");
    let ws = Workspace::new(model);
    let betas = beta_schedule(model, config);
    let mut trace = Vec::with_capacity(config.sweeps);
    run_read(model, &ws, config, &betas, read_index, Some(&mut trace));
    trace
}

fn run_read(
    model: &QuboModel,
    ws: &Workspace,
    config: &SolverConfig,
    betas: &[f64],
    read: u64,
    mut trace: Option<&mut Vec<f64>>,
) -> Vec<bool> {
    let n = model.n_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(read);
    let start = match &config.initial {
        Some(bits) => bits.clone(),
        None => (0..n).map(|_| rng.random()).collect(),
    };
    let mut state = ws.init(start);
    let mut best = state.energy;
    for &beta in betas {
        for v in 0..n {
            let d = ws.delta(&state, v);
            if d <= 0.0 || rng.random::<f64>() < (-beta * d).exp() {
                ws.flip(&mut state, v);
                best = best.min(state.energy);
            }
        }
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(best);
        }
    }
    state.bits
}

/// Geometric ramp of `config.sweeps` inverse temperatures.
fn beta_schedule(model: &QuboModel, config: &SolverConfig) -> Vec<f64> {
    let (hot, cold) = config.beta_range.unwrap_or_else(|| derived_beta_range(model));
    let sweeps = config.sweeps;
    if sweeps == 1 {
        return vec![hot];
    }
    let ratio = cold / hot;
    (0..sweeps)
        .map(|t| hot * ratio.powf(t as f64 / (sweeps - 1) as f64))
        .collect()
}

/// Default β bounds from the model's single-flip energy scale: the hot end
/// accepts the largest possible uphill move with probability one half, the
/// cold end accepts the smallest resolvable one with probability 0.01.
fn derived_beta_range(model: &QuboModel) -> (f64, f64) {
    let mut row_abs = vec![0.0f64; model.n_vars()];
    let mut min_abs = f64::INFINITY;
    for (i, j, v) in model.coefficients() {
        let a = v.abs();
        min_abs = min_abs.min(a);
        row_abs[i] += a;
        if i != j {
            row_abs[j] += a;
        }
    }
    let max_delta = row_abs.iter().copied().fold(0.0f64, f64::max);
    if max_delta == 0.0 {
        // Constant landscape (no coefficients): any schedule samples it.
        return (1.0, 1.0);
    }
    (2f64.ln() / max_delta, 100f64.ln() / min_abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artificial;
    use crate::qubo::{build_qubo, LagrangeWeights, QuboModel, VariableRegistry};

    fn model(n_t: usize) -> QuboModel {
        build_qubo(&artificial::instance(n_t), &LagrangeWeights::default()).unwrap()
    }

    fn tour_bits(reg: &VariableRegistry, seq: &[usize]) -> Vec<bool> {
        let mut bits = vec![false; reg.n_vars()];
        let mut prev = 0;
        for &s in seq {
            bits[reg.edge(prev, s)] = true;
            prev = s;
        }
        bits[reg.edge(prev, 0)] = true;
        for i in 1..=reg.n_t() {
            if !seq.contains(&i) {
                bits[reg.slack_out(i)] = true;
                bits[reg.slack_in(i)] = true;
            }
        }
        bits
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let m = model(3);
        let config = SolverConfig {
            seed: 7,
            reads: 6,
            sweeps: 200,
            ..SolverConfig::default()
        };
        let a = simulated_annealing(&m, &config);
        let b = simulated_annealing(&m, &config);
        assert_eq!(a, b);
        assert_eq!(a.total_occurrences(), 6);
    }

    #[test]
    fn quench_from_the_optimum_stays_put() {
        let m = model(4);
        let optimum = tour_bits(m.registry(), &[1, 3, 4]);
        let config = SolverConfig {
            seed: 0,
            reads: 5,
            sweeps: 50,
            beta_range: Some((1e9, 1e9)),
            initial: Some(optimum),
            ..SolverConfig::default()
        };
        let set = simulated_annealing(&m, &config);
        assert_eq!(set.samples.len(), 1);
        assert_eq!(set.best().unwrap().energy, 10.0);
    }

    #[test]
    fn best_so_far_trace_is_monotone() {
        let m = model(3);
        let config = SolverConfig {
            seed: 3,
            reads: 1,
            sweeps: 300,
            ..SolverConfig::default()
        };
        for read in 0..4 {
            let trace = anneal_trace(&m, &config, read);
            assert_eq!(trace.len(), 300);
            for pair in trace.windows(2) {
                assert!(pair[1] <= pair[0], "best-so-far energy rose: {pair:?}");
            }
        }
    }

    #[test]
    fn recovers_the_optimum_with_a_modest_budget() {
        let m = model(4);
        let config = SolverConfig {
            seed: 11,
            reads: 40,
            sweeps: 2000,
            ..SolverConfig::default()
        };
        let set = simulated_annealing(&m, &config);
        assert_eq!(set.best().unwrap().energy, 10.0);
    }

    #[test]
    fn schedule_shape() {
        let m = model(2);
        let one = SolverConfig {
            sweeps: 1,
            beta_range: Some((0.5, 8.0)),
            ..SolverConfig::default()
        };
        assert_eq!(beta_schedule(&m, &one), vec![0.5]);
        let several = SolverConfig {
            sweeps: 5,
            beta_range: Some((0.5, 8.0)),
            ..SolverConfig::default()
        };
        let betas = beta_schedule(&m, &several);
        assert_eq!(betas.len(), 5);
        assert!((betas[0] - 0.5).abs() < 1e-12);
        assert!((betas[4] - 8.0).abs() < 1e-12);
        // Geometric: constant ratio between consecutive temperatures.
        let r = betas[1] / betas[0];
        for pair in betas.windows(2) {
            assert!((pair[1] / pair[0] - r).abs() < 1e-9);
        }
    }

    #[test]
    fn derived_bounds_bracket_the_couplings() {
        let m = model(3);
        let (hot, cold) = derived_beta_range(&m);
        assert!(hot > 0.0 && cold > hot);
        // The hottest temperature accepts the worst move half the time.
        let max_row: f64 = {
            let mut rows = vec![0.0f64; m.n_vars()];
            for (i, j, v) in m.coefficients() {
                rows[i] += v.abs();
                if i != j {
                    rows[j] += v.abs();
                }
            }
            rows.into_iter().fold(0.0, f64::max)
        };
        assert!(((-hot * max_row).exp() - 0.5).abs() < 1e-12);
    }
}
