//! Classical samplers over a [`QuboModel`]: steepest descent, tabu search,
//! simulated annealing, and exhaustive enumeration, plus a landscape scan
//! for plotting.
//!
//! All samplers share the single-bit-flip neighborhood with incremental
//! energy updates (see [`evaluator`]), and the sampling solvers draw one
//! independent RNG stream per read from the master seed, so results are
//! bit-identical whether reads run serially or in parallel. Wall time is
//! reported but deliberately excluded from equality, which is what the
//! determinism contract compares.

mod anneal;
mod descent;
mod evaluator;
mod exact;
mod tabu;

pub use anneal::{anneal_trace, simulated_annealing};
pub use descent::steepest_descent;
pub use exact::{exhaustive_minimum, landscape_scan};
pub use tabu::tabu_search;

use crate::qubo::QuboModel;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("initial vector has {got} bits, model has {expected} variables")]
    LengthMismatch { got: usize, expected: usize },
    #[error("{n_vars} variables exceeds the {limit}-variable enumeration guard")]
    TooManyVariables { n_vars: usize, limit: usize },
    #[error("scan range invalid: start {start}, stop {stop}, stride {stride} over {n_vars} variables")]
    InvalidScan {
        start: u64,
        stop: u64,
        stride: u64,
        n_vars: usize,
    },
    #[error("solver configuration rejected: {detail}")]
    InvalidConfig { detail: String },
}

/// Knobs for the sampling solvers. `reads` and `seed` apply to both; `sweeps`,
/// `beta_range`, and `initial` belong to annealing; `tenure` and `max_iters`
/// to tabu search.
///
/// There is deliberately no wall-clock timeout: a time-based cutoff would
/// break the determinism contract, so the stopping knobs are all counted
/// (`sweeps`, `max_iters`, the tabu stall budget).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Master seed; read `r` runs on its own stream derived from it.
    pub seed: u64,
    pub reads: usize,
    /// Annealing sweeps per read (one proposed flip per variable per sweep).
    pub sweeps: usize,
    /// Tabu recency, in iterations; the classic library cap of 20 applies.
    pub tenure: usize,
    /// Annealing inverse-temperature bounds `(beta_hot, beta_cold)`; derived
    /// from the model's single-flip energy scale when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_range: Option<(f64, f64)>,
    /// Hard iteration cap per tabu read, on top of the stall budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<u64>,
    /// Fixed starting vector for annealing reads instead of a random one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<bool>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            reads: 100,
            sweeps: 1000,
            tenure: 20,
            beta_range: None,
            max_iters: None,
            initial: None,
        }
    }
}

impl SolverConfig {
    /// Validates the field invariants: `reads >= 1`, `sweeps >= 1`,
    /// `1 <= tenure <= 20`, and positive finite beta bounds when given.
    pub fn check(&self) -> Result<(), SolverError> {
        let reject = |detail: String| Err(SolverError::InvalidConfig { detail });
        if self.reads == 0 {
            return reject("reads must be at least 1".into());
        }
        if self.sweeps == 0 {
            return reject("sweeps must be at least 1".into());
        }
        if !(1..=20).contains(&self.tenure) {
            return reject(format!("tenure must be within 1..=20, got {}", self.tenure));
        }
        if let Some((hot, cold)) = self.beta_range {
            if !(hot > 0.0 && cold > 0.0 && hot.is_finite() && cold.is_finite()) {
                return reject(format!(
                    "beta_range bounds must be positive and finite, got ({hot}, {cold})"
                ));
            }
        }
        Ok(())
    }
}

/// One assignment with its model energy and how many reads landed on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(with = "bitstring")]
    pub bits: Vec<bool>,
    pub energy: f64,
    pub occurrences: u64,
}

impl Sample {
    /// The bits as a `0`/`1` string, lowest variable index first.
    pub fn bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Solver output: deduplicated samples sorted ascending by energy (ties by
/// bit pattern), with the solver name, the echoed configuration, and the
/// wall time of the run.
///
/// Equality ignores `wall_time` — two runs of a seeded solver compare equal
/// exactly when they produced the same samples under the same configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    pub solver_name: String,
    pub wall_time: f64,
    /// Configuration echo; absent for the enumeration solver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<SolverConfig>,
}

impl PartialEq for SampleSet {
    fn eq(&self, other: &Self) -> bool {
        self.samples == other.samples
            && self.solver_name == other.solver_name
            && self.config == other.config
    }
}

impl SampleSet {
    /// Lowest-energy sample, if any reads ran.
    pub fn best(&self) -> Option<&Sample> {
        self.samples.first()
    }

    /// Total read count behind this set.
    pub fn total_occurrences(&self) -> u64 {
        self.samples.iter().map(|s| s.occurrences).sum()
    }
}

/// Integer encoding of a bit vector: bit `b` of the integer is variable `b`
/// (little-endian), the ordering used by [`exhaustive_minimum`] and
/// [`landscape_scan`].
pub fn integer_code(bits: &[bool]) -> u64 {
    assert!(bits.len() <= 64, "integer encoding covers at most 64 bits");
    bits.iter()
        .enumerate()
        .fold(0u64, |acc, (b, &set)| acc | (u64::from(set) << b))
}

/// Inverse of [`integer_code`] for a model of `n_vars` variables.
pub fn bits_of_code(code: u64, n_vars: usize) -> Vec<bool> {
    assert!(n_vars <= 64, "integer encoding covers at most 64 bits");
    (0..n_vars).map(|b| code >> b & 1 == 1).collect()
}

/// Aggregates per-read final vectors into a [`SampleSet`]: deduplicate,
/// recompute every energy from the model (incremental drift never reaches
/// the reported numbers), and sort ascending by energy then bit pattern.
fn collate(
    solver_name: &str,
    model: &QuboModel,
    config: Option<SolverConfig>,
    finals: Vec<Vec<bool>>,
    started: Instant,
) -> SampleSet {
    let mut counts: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for bits in finals {
        *counts.entry(bits).or_insert(0) += 1;
    }
    let mut samples: Vec<Sample> = counts
        .into_iter()
        .map(|(bits, occurrences)| Sample {
            energy: model.energy(&bits),
            bits,
            occurrences,
        })
        .collect();
    samples.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.bits.cmp(&b.bits)));
    SampleSet {
        samples,
        solver_name: solver_name.to_owned(),
        wall_time: started.elapsed().as_secs_f64(),
        config,
    }
}

/// Serialize `Vec<bool>` as a compact `0`/`1` string.
mod bitstring {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[bool], ser: S) -> Result<S::Ok, S::Error> {
        let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        ser.serialize_str(&text)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<bool>, D::Error> {
        let text = String::deserialize(de)?;
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(D::Error::custom(format!("bad bitstring character {other:?}"))),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_encoding_round_trips() {
        for code in [0u64, 1, 2, 5, 1023, 140_032] {
            assert_eq!(integer_code(&bits_of_code(code, 18)), code);
        }
        // Little-endian: variable 0 is the least significant bit.
        assert_eq!(bits_of_code(1, 3), vec![true, false, false]);
        assert_eq!(integer_code(&[false, true]), 2);
    }

    #[test]
    fn config_invariants_are_enforced() {
        assert!(SolverConfig::default().check().is_ok());
        let bad_reads = SolverConfig {
            reads: 0,
            ..SolverConfig::default()
        };
        assert!(bad_reads.check().is_err());
        let bad_tenure = SolverConfig {
            tenure: 21,
            ..SolverConfig::default()
        };
        assert!(bad_tenure.check().is_err());
        let bad_beta = SolverConfig {
            beta_range: Some((0.0, 1.0)),
            ..SolverConfig::default()
        };
        assert!(bad_beta.check().is_err());
    }

    #[test]
    fn sample_serialization_uses_bitstrings() {
        let sample = Sample {
            bits: vec![true, false, true],
            energy: -2.5,
            occurrences: 7,
        };
        let json = serde_json::to_string(&sample).unwrap();
        assert!(json.contains("\"101\""), "{json}");
        let back: Sample = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sample);
        assert_eq!(sample.bitstring(), "101");
    }

    #[test]
    fn sample_set_equality_ignores_wall_time() {
        let set = SampleSet {
            samples: vec![],
            solver_name: "tabu_search".into(),
            wall_time: 1.0,
            config: None,
        };
        let mut faster = set.clone();
        faster.wall_time = 0.01;
        assert_eq!(set, faster);
    }
}
