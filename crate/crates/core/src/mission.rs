//! Decoding, validation, and ground-truth enumeration of mission plans.
//!
//! A low-energy bit vector is only useful once it is read back as a
//! schedule: which debris, in what order, arriving when, at what cost. This
//! module walks validated vectors into [`MissionPlan`]s, re-encodes
//! sequences into vectors, checks every constraint from its combinatorial
//! definition (independent of the penalty expansion), and brute-forces
//! small instances to produce the feasible set the samplers are judged
//! against.

use crate::instance::ProblemInstance;
use crate::qubo::VariableRegistry;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

/// Candidate ceiling for [`oracle_enumerate`]: above this many ordered
/// selections the oracle refuses and reports the count instead.
pub const ORACLE_GUARD: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum MissionError {
    #[error("bit vector has {got} bits, registry has {expected} variables")]
    LengthMismatch { got: usize, expected: usize },
    #[error("bit vector fails validation ({}); run validate for details", .report.failing_names().join(", "))]
    InvalidBits { report: Box<ValidationReport> },
    #[error("selected edges do not form a single closed tour through the depot")]
    DisconnectedTour,
    #[error("sequence has {got} targets, instance selects {expected}")]
    WrongSequenceLength { got: usize, expected: usize },
    #[error("target index {index} repeats in the sequence")]
    DuplicateTarget { index: usize },
    #[error("target index {index} outside 1..={n_t}")]
    TargetOutOfRange { index: usize, n_t: usize },
    #[error("{candidates} candidate sequences exceed the enumeration guard of {guard}")]
    SearchSpaceTooLarge { candidates: BigUint, guard: u64 },
    #[error("path counting needs 1 <= n_s <= n_t, got n_s = {n_s}, n_t = {n_t}")]
    BadCounts { n_t: usize, n_s: usize },
}

/// One constraint verdict: pass/fail plus what exactly is violated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub passed: bool,
    pub detail: String,
}

impl ConstraintCheck {
    fn pass() -> Self {
        ConstraintCheck {
            passed: true,
            detail: "ok".to_owned(),
        }
    }

    fn fail(detail: String) -> Self {
        ConstraintCheck {
            passed: false,
            detail,
        }
    }
}

/// Per-constraint verdicts for one bit vector; `valid` holds exactly when
/// all eight pass. Slack consistency counts toward the degree verdicts, so
/// a verdict passes if and only if the matching penalty term is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub c1: ConstraintCheck,
    pub c2: ConstraintCheck,
    pub c3: ConstraintCheck,
    pub c4: ConstraintCheck,
    pub c5: ConstraintCheck,
    pub c6: ConstraintCheck,
    pub c7: ConstraintCheck,
    pub c8: ConstraintCheck,
    pub valid: bool,
}

impl ValidationReport {
    /// The verdicts in constraint order, `c1` first.
    pub fn checks(&self) -> [&ConstraintCheck; 8] {
        [
            &self.c1, &self.c2, &self.c3, &self.c4, &self.c5, &self.c6, &self.c7, &self.c8,
        ]
    }

    /// Names of the failing constraints, in order.
    pub fn failing_names(&self) -> Vec<&'static str> {
        const NAMES: [&str; 8] = ["c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"];
        self.checks()
            .into_iter()
            .zip(NAMES)
            .filter(|(check, _)| !check.passed)
            .map(|(_, name)| name)
            .collect()
    }
}

/// A decoded removal schedule: the visit order with arrival epochs and the
/// propellant breakdown per leg and per disposal.
///
/// `transfer_costs` covers all `n_s + 1` legs including the free
/// deploy/return legs to the dummy node; `arrival_times` covers the real
/// debris only, with the return to the disposal window recorded separately
/// as `return_time`. `duration` is the arrival epoch at the last debris.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionPlan {
    /// Visit order, 1-based real debris indices.
    pub sequence: Vec<usize>,
    /// Resolved display names, parallel to `sequence`.
    pub labels: Vec<String>,
    /// Arrival epoch at each visited debris, days from t0.
    pub arrival_times: Vec<f64>,
    /// Return-to-dummy epoch, the deadline by convention.
    pub return_time: f64,
    /// Per-leg transfer costs, deploy and return legs included.
    pub transfer_costs: Vec<f64>,
    /// Disposal cost charged at each visited debris.
    pub disposal_costs: Vec<f64>,
    pub total_transfer: f64,
    pub total_disposal: f64,
    pub total: f64,
    /// Arrival epoch at the last debris, days from t0.
    pub duration: f64,
    /// Mission deadline, days from t0.
    pub deadline: f64,
}

impl MissionPlan {
    /// Builds the schedule and cost breakdown for a visit order without
    /// going through a bit vector. Checks shape (length, range,
    /// distinctness) but not timing feasibility — that is [`validate`]'s
    /// job on the encoded vector.
    pub fn from_sequence(
        sequence: &[usize],
        instance: &ProblemInstance,
    ) -> Result<MissionPlan, MissionError> {
        if sequence.len() != instance.n_s {
            return Err(MissionError::WrongSequenceLength {
                got: sequence.len(),
                expected: instance.n_s,
            });
        }
        let mut seen = vec![false; instance.n_t + 1];
        for &s in sequence {
            if !(1..=instance.n_t).contains(&s) {
                return Err(MissionError::TargetOutOfRange {
                    index: s,
                    n_t: instance.n_t,
                });
            }
            if seen[s] {
                return Err(MissionError::DuplicateTarget { index: s });
            }
            seen[s] = true;
        }

        let mut arrival_times = Vec::with_capacity(sequence.len());
        let mut transfer_costs = Vec::with_capacity(sequence.len() + 1);
        let mut disposal_costs = Vec::with_capacity(sequence.len());
        let mut prev = 0;
        for &s in sequence {
            arrival_times.push(instance.t[prev][s]);
            transfer_costs.push(instance.c[prev][s]);
            disposal_costs.push(instance.disposal[s]);
            prev = s;
        }
        transfer_costs.push(instance.c[prev][0]);
        let total_transfer: f64 = transfer_costs.iter().sum();
        let total_disposal: f64 = disposal_costs.iter().sum();
        Ok(MissionPlan {
            sequence: sequence.to_vec(),
            labels: sequence.iter().map(|&s| instance.label(s).to_owned()).collect(),
            duration: arrival_times.last().copied().unwrap_or(0.0),
            arrival_times,
            return_time: instance.t[prev][0],
            transfer_costs,
            disposal_costs,
            total_transfer,
            total_disposal,
            total: total_transfer + total_disposal,
            deadline: instance.t_max,
        })
    }

    /// Slack to the deadline, days.
    pub fn margin(&self) -> f64 {
        self.deadline - self.duration
    }
}

/// Checks all eight constraints of `bits` against their combinatorial
/// definitions: edge cardinality, depot degrees, per-node degrees with
/// slack consistency, flow balance, two-cycle exclusion, and the servicing
/// timing chain (strict inequality, so exactly-on-time chains pass).
pub fn validate(
    bits: &[bool],
    instance: &ProblemInstance,
) -> Result<ValidationReport, MissionError> {
    let reg = VariableRegistry::new(instance.n_t);
    if bits.len() != reg.n_vars() {
        return Err(MissionError::LengthMismatch {
            got: bits.len(),
            expected: reg.n_vars(),
        });
    }
    let n_t = instance.n_t;
    let x = |i: usize, j: usize| bits[reg.edge(i, j)];

    let edge_count: usize = (0..=n_t)
        .flat_map(|i| (0..=n_t).filter(move |&j| j != i).map(move |j| (i, j)))
        .filter(|&(i, j)| x(i, j))
        .count();
    let want = instance.n_s + 1;
    let c1 = if edge_count == want {
        ConstraintCheck::pass()
    } else {
        ConstraintCheck::fail(format!("{edge_count} edges selected, expected {want}"))
    };

    let depot_out = (1..=n_t).filter(|&j| x(0, j)).count();
    let c2 = if depot_out == 1 {
        ConstraintCheck::pass()
    } else {
        ConstraintCheck::fail(format!("depot departs {depot_out} times, expected 1"))
    };
    let depot_in = (1..=n_t).filter(|&j| x(j, 0)).count();
    let c3 = if depot_in == 1 {
        ConstraintCheck::pass()
    } else {
        ConstraintCheck::fail(format!("depot is entered {depot_in} times, expected 1"))
    };

    let out_deg = |i: usize| (0..=n_t).filter(|&j| j != i && x(i, j)).count();
    let in_deg = |i: usize| (0..=n_t).filter(|&j| j != i && x(j, i)).count();

    let bad4: Vec<usize> = (1..=n_t)
        .filter(|&i| out_deg(i) + bits[reg.slack_out(i)] as usize != 1)
        .collect();
    let c4 = if bad4.is_empty() {
        ConstraintCheck::pass()
    } else {
        ConstraintCheck::fail(format!(
            "departure count plus slack differs from 1 at nodes {bad4:?}"
        ))
    };
    let bad5: Vec<usize> = (1..=n_t)
        .filter(|&i| in_deg(i) + bits[reg.slack_in(i)] as usize != 1)
        .collect();
    let c5 = if bad5.is_empty() {
        ConstraintCheck::pass()
    } else {
        ConstraintCheck::fail(format!(
            "arrival count plus slack differs from 1 at nodes {bad5:?}"
        ))
    };

    let bad6: Vec<usize> = (1..=n_t)
        .filter(|&i| in_deg(i) != out_deg(i))
        .collect();
    let c6 = if bad6.is_empty() {
        ConstraintCheck::pass()
    } else {
        ConstraintCheck::fail(format!("arrivals do not balance departures at nodes {bad6:?}"))
    };

    let two_cycles: Vec<(usize, usize)> = (0..=n_t)
        .flat_map(|i| ((i + 1)..=n_t).map(move |j| (i, j)))
        .filter(|&(i, j)| x(i, j) && x(j, i))
        .collect();
    let c7 = if two_cycles.is_empty() {
        ConstraintCheck::pass()
    } else {
        ConstraintCheck::fail(format!("both directions selected for pairs {two_cycles:?}"))
    };

    let mut late_triples: Vec<(usize, usize, usize)> = Vec::new();
    for j in 1..=n_t {
        for i in 0..=n_t {
            if i == j || !x(i, j) {
                continue;
            }
            for k in 0..=n_t {
                if k == j || k == i || !x(j, k) {
                    continue;
                }
                if instance.t[i][j] + instance.t_s > instance.t[j][k] {
                    late_triples.push((i, j, k));
                }
            }
        }
    }
    let c8 = if late_triples.is_empty() {
        ConstraintCheck::pass()
    } else {
        ConstraintCheck::fail(format!(
            "servicing window violated on triples {late_triples:?}"
        ))
    };

    let checks = [&c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8];
    let valid = checks.iter().all(|check| check.passed);
    Ok(ValidationReport {
        c1,
        c2,
        c3,
        c4,
        c5,
        c6,
        c7,
        c8,
        valid,
    })
}

/// Reads a constraint-satisfying bit vector back into a [`MissionPlan`] by
/// walking the unique tour from the depot. Refuses invalid vectors rather
/// than reconstructing a best-effort path — a silently repaired plan would
/// mask solver failures.
pub fn decode(bits: &[bool], instance: &ProblemInstance) -> Result<MissionPlan, MissionError> {
    let report = validate(bits, instance)?;
    if !report.valid {
        return Err(MissionError::InvalidBits {
            report: Box::new(report),
        });
    }
    let reg = VariableRegistry::new(instance.n_t);
    let n_t = instance.n_t;
    let x = |i: usize, j: usize| bits[reg.edge(i, j)];
    let next = |i: usize| (0..=n_t).filter(|&j| j != i).find(|&j| x(i, j));

    let mut sequence = Vec::new();
    // A valid vector gives the depot exactly one departure, and every
    // arrival is balanced by a departure, so the walk cannot dead-end.
    let mut node = next(0).expect("validated vectors depart the depot once");
    let mut walked = 1;
    while node != 0 {
        sequence.push(node);
        node = next(node).expect("validated vectors balance arrivals with departures");
        walked += 1;
    }
    let selected: usize = (0..=n_t)
        .flat_map(|i| (0..=n_t).filter(move |&j| j != i).map(move |j| (i, j)))
        .filter(|&(i, j)| x(i, j))
        .count();
    // With a zero servicing time the timing chain cannot exclude real-only
    // side cycles, so the depot tour may not account for every edge.
    if walked != selected {
        return Err(MissionError::DisconnectedTour);
    }
    MissionPlan::from_sequence(&sequence, instance)
}

/// Writes a visit order as a bit vector: the depot-to-depot edge chain plus
/// the slack pattern that zeroes the degree penalties for unvisited debris.
/// Inverse of [`decode`] on feasible sequences.
pub fn encode(sequence: &[usize], instance: &ProblemInstance) -> Result<Vec<bool>, MissionError> {
    // Shape checks shared with plan construction.
    let _ = MissionPlan::from_sequence(sequence, instance)?;
    let reg = VariableRegistry::new(instance.n_t);
    let mut bits = vec![false; reg.n_vars()];
    let mut prev = 0;
    for &s in sequence {
        bits[reg.edge(prev, s)] = true;
        prev = s;
    }
    bits[reg.edge(prev, 0)] = true;
    for i in 1..=instance.n_t {
        if !sequence.contains(&i) {
            bits[reg.slack_out(i)] = true;
            bits[reg.slack_in(i)] = true;
        }
    }
    Ok(bits)
}

/// One feasible visit order with its cost and schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OraclePath {
    pub sequence: Vec<usize>,
    pub total: f64,
    pub arrival_times: Vec<f64>,
}

/// Exact number of ordered `n_s`-selections from `n_t` debris,
/// `n_t!/(n_t − n_s)!`, in overflow-safe integer arithmetic.
pub fn count_paths(n_t: usize, n_s: usize) -> Result<BigUint, MissionError> {
    if n_s == 0 || n_s > n_t {
        return Err(MissionError::BadCounts { n_t, n_s });
    }
    Ok((n_t - n_s + 1..=n_t)
        .map(BigUint::from)
        .product())
}

/// Brute-forces every ordered `n_s`-selection of real debris, keeps those
/// whose leg chain leaves at least the servicing dwell between consecutive
/// alignment epochs (the final leg checked against the deadline), and
/// returns them sorted by cost, ties by sequence.
///
/// This is the ground truth the samplers are judged against, so it applies
/// the same feasibility rules as the penalty model — including the
/// two-cycle exclusion through the depot, which makes single-target
/// missions infeasible (the deploy and return legs would form exactly the
/// banned out-and-back pair).
pub fn oracle_enumerate(instance: &ProblemInstance) -> Result<Vec<OraclePath>, MissionError> {
    let candidates = count_paths(instance.n_t, instance.n_s)
        .expect("instance invariants bound 1 <= n_s <= n_t");
    if candidates > BigUint::from(ORACLE_GUARD) {
        return Err(MissionError::SearchSpaceTooLarge {
            candidates,
            guard: ORACLE_GUARD,
        });
    }
    if instance.n_s == 1 {
        return Ok(Vec::new());
    }

    let mut feasible: Vec<Vec<usize>> = Vec::new();
    let mut seq = Vec::with_capacity(instance.n_s);
    let mut used = vec![false; instance.n_t + 1];
    search(instance, &mut seq, &mut used, &mut feasible);

    let mut rows: Vec<OraclePath> = feasible
        .into_iter()
        .map(|sequence| {
            let plan = MissionPlan::from_sequence(&sequence, instance)
                .expect("enumerated sequences are well-formed");
            OraclePath {
                sequence,
                total: plan.total,
                arrival_times: plan.arrival_times,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.total
            .total_cmp(&b.total)
            .then_with(|| a.sequence.cmp(&b.sequence))
    });
    Ok(rows)
}

/// Depth-first extension of `seq`. Each appended target closes one new
/// timing triple (previous node, current tail, new target), so violated
/// prefixes prune their whole subtree; the return leg's triple is checked
/// at full length.
fn search(
    instance: &ProblemInstance,
    seq: &mut Vec<usize>,
    used: &mut [bool],
    feasible: &mut Vec<Vec<usize>>,
) {
    if seq.len() == instance.n_s {
        let last = seq[seq.len() - 1];
        let before = if seq.len() >= 2 { seq[seq.len() - 2] } else { 0 };
        if instance.t[before][last] + instance.t_s <= instance.t[last][0] {
            feasible.push(seq.clone());
        }
        return;
    }
    for next in 1..=instance.n_t {
        if used[next] {
            continue;
        }
        if let Some(&tail) = seq.last() {
            let before = if seq.len() >= 2 { seq[seq.len() - 2] } else { 0 };
            if instance.t[before][tail] + instance.t_s > instance.t[tail][next] {
                continue;
            }
        }
        seq.push(next);
        used[next] = true;
        search(instance, seq, used, feasible);
        seq.pop();
        used[next] = false;
    }
}

/// Machine- and human-readable renderings of one plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanReport {
    /// Pretty-printed JSON mirroring [`MissionPlan`] plus the margin.
    pub json: String,
    /// Plain-text cost and schedule breakdown.
    pub text: String,
}

/// Renders `plan` for reporting: a JSON document for tooling and a text
/// breakdown in the order operators read it — route, schedule, costs,
/// margin.
pub fn plan_report(plan: &MissionPlan) -> PlanReport {
    #[derive(Serialize)]
    struct Document<'a> {
        #[serde(flatten)]
        plan: &'a MissionPlan,
        margin: f64,
    }
    let json = serde_json::to_string_pretty(&Document {
        plan,
        margin: plan.margin(),
    })
    .expect("plan serialization cannot fail");

    let mut text = String::new();
    let n = plan.sequence.len();
    let mut push = |line: String| {
        text.push_str(&line);
        text.push('\n');
    };
    push(format!(
        "mission plan: {n} target{}, total cost {}",
        if n == 1 { "" } else { "s" },
        plan.total
    ));
    push(format!("  route: depot -> {} -> depot", plan.labels.join(" -> ")));
    for (k, label) in plan.labels.iter().enumerate() {
        push(format!(
            "  {:>2}. {label}  arrival day {}  transfer {}  disposal {}",
            k + 1,
            plan.arrival_times[k],
            plan.transfer_costs[k],
            plan.disposal_costs[k],
        ));
    }
    push(format!(
        "  return leg: transfer {}, disposal window day {}",
        plan.transfer_costs[n],
        plan.return_time
    ));
    push(format!(
        "  totals: transfer {} + disposal {} = {}",
        plan.total_transfer, plan.total_disposal, plan.total
    ));
    push(format!(
        "  duration: day {} of {} allowed, margin {}",
        plan.duration,
        plan.deadline,
        plan.margin()
    ));
    PlanReport { json, text }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artificial;
    use crate::qubo::{build_qubo, penalty_breakdown, LagrangeWeights};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn decodes_the_optimal_four_debris_plan() {
        let inst = artificial::instance(4);
        let bits = encode(&[1, 3, 4], &inst).unwrap();
        let plan = decode(&bits, &inst).unwrap();
        assert_eq!(plan.sequence, vec![1, 3, 4]);
        assert_eq!(plan.labels, vec!["debris-1", "debris-3", "debris-4"]);
        assert_eq!(plan.arrival_times, vec![0.0, 4.0, 6.0]);
        assert_eq!(plan.return_time, 7.0);
        assert_eq!(plan.total, 10.0);
        assert_eq!(plan.total_transfer + plan.total_disposal, plan.total);
        assert_eq!(plan.duration, 6.0);
        assert_eq!(plan.margin(), 1.0);
    }

    #[test]
    fn two_debris_costs_split_into_transfer_and_disposal() {
        let inst = artificial::instance(2);
        let plan = decode(&encode(&[1, 2], &inst).unwrap(), &inst).unwrap();
        // total = C[1][2] + c1 + c2 = 1 + 1 + 6.
        assert_eq!(plan.total, 8.0);
        assert_eq!(plan.total_transfer, 1.0);
        assert_eq!(plan.total_disposal, 7.0);
        assert_eq!(plan.transfer_costs, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn encoded_sequences_hit_their_model_energies() {
        let inst = artificial::instance(4);
        let model = build_qubo(&inst, &LagrangeWeights::default()).unwrap();
        let optimal = encode(&[1, 3, 4], &inst).unwrap();
        assert_eq!(model.energy(&optimal), 10.0);
        let detour = encode(&[1, 3, 2], &inst).unwrap();
        assert_eq!(model.energy(&detour), 13.0);
    }

    #[test]
    fn encode_decode_round_trip() {
        let inst = artificial::instance(4);
        for seq in [vec![2, 1, 3], vec![1, 2, 3], vec![1, 3, 4]] {
            let plan = decode(&encode(&seq, &inst).unwrap(), &inst).unwrap();
            assert_eq!(plan.sequence, seq);
        }
    }

    #[test]
    fn encode_rejects_malformed_sequences() {
        let inst = artificial::instance(4);
        assert!(matches!(
            encode(&[1, 1, 2], &inst),
            Err(MissionError::DuplicateTarget { index: 1 })
        ));
        assert!(matches!(
            encode(&[1, 2, 5], &inst),
            Err(MissionError::TargetOutOfRange { index: 5, n_t: 4 })
        ));
        assert!(matches!(
            encode(&[1, 2], &inst),
            Err(MissionError::WrongSequenceLength {
                got: 2,
                expected: 3
            })
        ));
    }

    #[test]
    fn decode_refuses_invalid_vectors() {
        let inst = artificial::instance(4);
        let zeros = vec![false; VariableRegistry::new(4).n_vars()];
        match decode(&zeros, &inst) {
            Err(MissionError::InvalidBits { report }) => {
                assert!(!report.valid);
                assert_eq!(report.failing_names(), vec!["c1", "c2", "c3", "c4", "c5"]);
            }
            other => panic!("expected InvalidBits, got {other:?}"),
        }
    }

    #[test]
    fn validation_passes_the_optimum_and_explains_failures() {
        let inst = artificial::instance(4);
        let good = validate(&encode(&[1, 3, 4], &inst).unwrap(), &inst).unwrap();
        assert!(good.valid);
        assert!(good.checks().iter().all(|check| check.passed));

        // The reversed tour is shape-perfect but breaks the timing chain on
        // the triple (4, 3, 1): T[4][3] + 1 = 7 > T[3][1] = 4.
        let reversed = validate(&encode(&[4, 3, 1], &inst).unwrap(), &inst).unwrap();
        assert!(!reversed.valid);
        assert!(!reversed.c8.passed);
        assert!(reversed.c8.detail.contains("(4, 3, 1)"), "{}", reversed.c8.detail);
        assert!(reversed.c1.passed && reversed.c6.passed && reversed.c7.passed);
    }

    #[test]
    fn all_zero_bits_fail_the_counting_constraints_only() {
        let inst = artificial::instance(3);
        let report = validate(&vec![false; 18], &inst).unwrap();
        assert_eq!(report.failing_names(), vec!["c1", "c2", "c3", "c4", "c5"]);
        assert!(report.c6.passed && report.c7.passed && report.c8.passed);
    }

    #[test]
    fn verdicts_agree_with_penalty_terms_on_random_vectors() {
        let weights = LagrangeWeights::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n_t in [2, 3] {
            let inst = artificial::instance(n_t);
            let n_vars = VariableRegistry::new(n_t).n_vars();
            for _ in 0..10_000 {
                let bits: Vec<bool> = (0..n_vars).map(|_| rng.random()).collect();
                let report = validate(&bits, &inst).unwrap();
                let pb = penalty_breakdown(&inst, &weights, &bits);
                for (check, term) in report.checks().into_iter().zip(pb.constraints()) {
                    assert_eq!(check.passed, term == 0.0, "{check:?} vs {term}");
                }
                assert_eq!(report.valid, pb.constraints().iter().all(|&t| t == 0.0));
            }
        }
    }

    #[test]
    fn oracle_reproduces_the_known_feasible_sets() {
        for n_t in [4, 6] {
            let rows = oracle_enumerate(&artificial::instance(n_t)).unwrap();
            let got: Vec<(Vec<usize>, f64)> = rows
                .iter()
                .map(|r| (r.sequence.clone(), r.total))
                .collect();
            assert_eq!(got, artificial::known_solutions(n_t), "n_t = {n_t}");
        }
        let three = oracle_enumerate(&artificial::instance(3)).unwrap();
        let got: Vec<(Vec<usize>, f64)> = three
            .iter()
            .map(|r| (r.sequence.clone(), r.total))
            .collect();
        assert_eq!(got, artificial::known_solutions(3));
    }

    #[test]
    fn oracle_reports_both_two_debris_orientations() {
        let rows = oracle_enumerate(&artificial::instance(2)).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].sequence, vec![1, 2]);
        assert_eq!(rows[1].sequence, vec![2, 1]);
        assert!(rows.iter().all(|r| r.total == 8.0));
    }

    #[test]
    fn oracle_schedules_respect_the_servicing_gaps() {
        let inst = artificial::instance(4);
        for row in oracle_enumerate(&inst).unwrap() {
            for gap in row.arrival_times.windows(2) {
                assert!(gap[1] - gap[0] >= inst.t_s);
            }
            assert!(*row.arrival_times.last().unwrap() <= inst.t_max);
        }
    }

    #[test]
    fn oracle_guard_reports_the_candidate_count() {
        let n = 11;
        let labels = (1..=n).map(|i| format!("debris-{i}")).collect();
        let flat = vec![vec![0.0; n]; n];
        let inst =
            ProblemInstance::from_real_tables(10, 1.0, 0.0, labels, flat.clone(), flat, vec![0.0; n])
                .unwrap();
        match oracle_enumerate(&inst) {
            Err(MissionError::SearchSpaceTooLarge { candidates, guard }) => {
                assert_eq!(candidates, BigUint::from(39_916_800u64));
                assert_eq!(guard, ORACLE_GUARD);
            }
            other => panic!("expected the guard to fire, got {other:?}"),
        }
    }

    #[test]
    fn single_target_missions_are_infeasible_like_the_penalty_model() {
        // The deploy and return legs of a one-target tour form the banned
        // out-and-back pair through the depot.
        let base = artificial::instance(2);
        let inst = ProblemInstance::new(
            1,
            base.t_max,
            base.t_s,
            base.labels.clone(),
            base.t.clone(),
            base.c.clone(),
            base.disposal.clone(),
        )
        .unwrap();
        assert!(oracle_enumerate(&inst).unwrap().is_empty());
        // Mirrors the model: the encoded single-target tour fails c7.
        let report = validate(&encode(&[1], &inst).unwrap(), &inst).unwrap();
        assert!(!report.c7.passed);
    }

    #[test]
    fn path_counting_matches_the_factorial_quotient() {
        assert_eq!(count_paths(11, 10).unwrap(), BigUint::from(39_916_800u64));
        assert_eq!(count_paths(7, 1).unwrap(), BigUint::from(7u32));
        assert_eq!(count_paths(79, 5).unwrap(), BigUint::from(2_704_501_800u64));
        assert!(matches!(
            count_paths(3, 4),
            Err(MissionError::BadCounts { n_t: 3, n_s: 4 })
        ));
        assert!(matches!(count_paths(3, 0), Err(MissionError::BadCounts { .. })));
    }

    #[test]
    fn feasibility_equivalence_over_all_encodable_sequences() {
        // Every ordered 3-of-4 selection, encoded; zero penalty must single
        // out exactly the oracle's feasible set.
        let inst = artificial::instance(4);
        let weights = LagrangeWeights::default();
        let feasible: Vec<Vec<usize>> = oracle_enumerate(&inst)
            .unwrap()
            .into_iter()
            .map(|r| r.sequence)
            .collect();
        let mut checked = 0;
        for a in 1..=4 {
            for b in (1..=4).filter(|&b| b != a) {
                for c in (1..=4).filter(|&c| c != a && c != b) {
                    let seq = vec![a, b, c];
                    let bits = encode(&seq, &inst).unwrap();
                    let zero = penalty_breakdown(&inst, &weights, &bits)
                        .constraints()
                        .iter()
                        .all(|&t| t == 0.0);
                    assert_eq!(zero, feasible.contains(&seq), "{seq:?}");
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 24);
    }

    #[test]
    fn single_target_plan_report() {
        let base = artificial::instance(2);
        let inst = ProblemInstance::new(
            1,
            base.t_max,
            base.t_s,
            base.labels.clone(),
            base.t.clone(),
            base.c.clone(),
            base.disposal.clone(),
        )
        .unwrap();
        let plan = MissionPlan::from_sequence(&[2], &inst).unwrap();
        assert_eq!(plan.disposal_costs, vec![6.0]);
        assert_eq!(plan.transfer_costs, vec![0.0, 0.0]);
        assert_eq!(plan.total, 6.0);
        let report = plan_report(&plan);
        assert!(report.text.contains("1 target,"));
        assert!(report.text.contains("margin"));
    }

    #[test]
    fn plan_report_round_trips_through_json() {
        let inst = artificial::instance(4);
        let plan = decode(&encode(&[1, 3, 4], &inst).unwrap(), &inst).unwrap();
        let report = plan_report(&plan);
        let parsed: serde_json::Value = serde_json::from_str(&report.json).unwrap();
        assert_eq!(parsed["total"], 10.0);
        assert_eq!(parsed["margin"], 1.0);
        assert_eq!(parsed["sequence"], serde_json::json!([1, 3, 4]));
        assert!(report.text.contains("total cost 10"));
        assert!(report.text.contains("duration: day 6 of 7 allowed, margin 1"));
    }
}
