//! Steepest descent: the deterministic greedy baseline.

use super::evaluator::Workspace;
use super::{Sample, SolverError};
use crate::qubo::QuboModel;

/// Repeatedly flips the single bit giving the largest energy decrease, ties
/// broken by lowest variable index, until no flip decreases the energy, and
/// returns the resulting local minimum. Fully deterministic: where it lands
/// is a property of `initial` and the model alone — which is exactly how it
/// gets trapped by landscapes whose basins around the optimum are narrow.
pub fn steepest_descent(model: &QuboModel, initial: &[bool]) -> Result<Sample, SolverError> {
    if initial.len() != model.n_vars() {
        return Err(SolverError::LengthMismatch {
            got: initial.len(),
            expected: model.n_vars(),
        });
    }
    let ws = Workspace::new(model);
    let mut state = ws.init(initial.to_vec());
    loop {
        let mut steepest: Option<(usize, f64)> = None;
        for v in 0..model.n_vars() {
            let d = ws.delta(&state, v);
            // Strict comparisons keep the first (lowest-index) variable on ties.
            if d < 0.0 && steepest.is_none_or(|(_, best)| d < best) {
                steepest = Some((v, d));
            }
        }
        match steepest {
            Some((v, _)) => ws.flip(&mut state, v),
            None => break,
        }
    }
    Ok(Sample {
        energy: model.energy(&state.bits),
        bits: state.bits,
        occurrences: 1,
    })
}
