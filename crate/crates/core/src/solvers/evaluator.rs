//! Incremental single-flip energy machinery shared by the local-search
//! samplers.
//!
//! A [`Workspace`] holds per-model lookup tables; a [`State`] holds one
//! walker's bits, running energy, and penalty-group sums. Flipping variable
//! `v` costs O(groups and couplings touching `v`) instead of a full model
//! sweep, which is what makes dense penalty families (the all-edges
//! cardinality group in particular) affordable inside sweep loops.

use crate::qubo::{QuboModel, Structure};

pub(crate) struct Workspace<'m> {
    model: &'m QuboModel,
    view: View<'m>,
}

enum View<'m> {
    /// Build-time factoring: linear terms, product couplings, squared groups.
    Factored(&'m Structure),
    /// Adjacency rebuilt from flat coefficients (imported models).
    Generic {
        linear: Vec<f64>,
        adjacency: Vec<Vec<(u32, f64)>>,
    },
}

pub(crate) struct State {
    pub bits: Vec<bool>,
    pub energy: f64,
    /// Running `Σ coeff·x` per squared group; empty under the generic view.
    group_sums: Vec<f64>,
}

impl<'m> Workspace<'m> {
    pub fn new(model: &'m QuboModel) -> Self {
        let view = match &model.structure {
            Some(structure) => View::Factored(structure),
            None => {
                let n = model.n_vars();
                let mut linear = vec![0.0; n];
                let mut adjacency = vec![Vec::new(); n];
                for (i, j, v) in model.coefficients() {
                    if i == j {
                        linear[i] = v;
                    } else {
                        adjacency[i].push((j as u32, v));
                        adjacency[j].push((i as u32, v));
                    }
                }
                View::Generic { linear, adjacency }
            }
        };
        Workspace { model, view }
    }

    /// Starts a walker at `bits`, with the energy computed from the model
    /// (not incrementally), so every walk is anchored to an exact value.
    pub fn init(&self, bits: Vec<bool>) -> State {
        let energy = self.model.energy(&bits);
        let group_sums = match &self.view {
            View::Factored(s) => {
                let mut sums = vec![0.0; s.groups.len()];
                for (v, &set) in bits.iter().enumerate() {
                    if set {
                        for &(g, u) in &s.memberships[v] {
                            sums[g as usize] += u;
                        }
                    }
                }
                sums
            }
            View::Generic { .. } => Vec::new(),
        };
        State {
            bits,
            energy,
            group_sums,
        }
    }

    /// Energy change of flipping variable `v` in the current state.
    pub fn delta(&self, state: &State, v: usize) -> f64 {
        let sign = if state.bits[v] { -1.0 } else { 1.0 };
        match &self.view {
            View::Factored(s) => {
                let mut d = sign * s.linear[v];
                for &(partner, w) in &s.pairs[v] {
                    if state.bits[partner as usize] {
                        d += sign * w;
                    }
                }
                // w(S + δu + b)² − w(S + b)² = w(2δu(S + b) + u²).
                for &(g, u) in &s.memberships[v] {
                    let group = s.groups[g as usize];
                    d += group.weight
                        * (2.0 * sign * u * (state.group_sums[g as usize] + group.bias) + u * u);
                }
                d
            }
            View::Generic { linear, adjacency } => {
                let mut coupled = linear[v];
                for &(partner, w) in &adjacency[v] {
                    if state.bits[partner as usize] {
                        coupled += w;
                    }
                }
                sign * coupled
            }
        }
    }

    pub fn flip(&self, state: &mut State, v: usize) {
        state.energy += self.delta(state, v);
        let sign = if state.bits[v] { -1.0 } else { 1.0 };
        if let View::Factored(s) = &self.view {
            for &(g, u) in &s.memberships[v] {
                state.group_sums[g as usize] += sign * u;
            }
        }
        state.bits[v] = !state.bits[v];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artificial;
    use crate::qubo::{build_qubo, export_qubo, import_qubo, LagrangeWeights};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * f64::max(1.0, f64::max(a.abs(), b.abs()))
    }

    #[test]
    fn factored_delta_matches_energy_difference() {
        let model = build_qubo(&artificial::instance(3), &LagrangeWeights::default()).unwrap();
        let ws = Workspace::new(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let bits: Vec<bool> = (0..model.n_vars()).map(|_| rng.random()).collect();
            let state = ws.init(bits.clone());
            let v = rng.random_range(0..model.n_vars());
            let mut flipped = bits;
            flipped[v] = !flipped[v];
            let expected = model.energy(&flipped) - model.energy(&state.bits);
            assert!(
                close(ws.delta(&state, v), expected),
                "{} vs {expected}",
                ws.delta(&state, v)
            );
        }
    }

    #[test]
    fn generic_view_agrees_with_factored() {
        let factored = build_qubo(&artificial::instance(3), &LagrangeWeights::default()).unwrap();
        // An import has no structure attached, exercising the generic path.
        let generic = import_qubo(&export_qubo(&factored).model).unwrap();
        let fw = Workspace::new(&factored);
        let gw = Workspace::new(&generic);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let bits: Vec<bool> = (0..factored.n_vars()).map(|_| rng.random()).collect();
            let fs = fw.init(bits.clone());
            let gs = gw.init(bits);
            let v = rng.random_range(0..factored.n_vars());
            assert!(close(fw.delta(&fs, v), gw.delta(&gs, v)));
        }
    }

    #[test]
    fn incremental_energy_tracks_the_model_over_long_walks() {
        let model = build_qubo(&artificial::instance(4), &LagrangeWeights::default()).unwrap();
        let ws = Workspace::new(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut state = ws.init(vec![false; model.n_vars()]);
        for step in 0..2000 {
            ws.flip(&mut state, rng.random_range(0..model.n_vars()));
            if step % 97 == 0 {
                assert!(close(state.energy, model.energy(&state.bits)));
            }
        }
    }
}
