//! Quadratic-model assembly: translates a [`ProblemInstance`] and Lagrange
//! weights into a sparse upper-triangular binary model, with energy
//! evaluation and per-constraint penalty accounting.
//!
//! Eight penalty families are expanded over the edge variables `x_{i,j}` and
//! the per-node slack pair `s4_i`/`s5_i`: tour size, dummy departure/arrival,
//! per-node degree bounds, flow conservation, backtrack exclusion, and the
//! servicing-time chain over alignment epochs.

mod export;

pub use export::{export_qubo, import_qubo, QuboExport};

use crate::instance::ProblemInstance;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuboError {
    #[error("Lagrange weight {name} must be nonnegative, got {value}")]
    NegativeWeight { name: &'static str, value: f64 },
    #[error("model text is malformed at line {line}: {detail}")]
    Malformed { line: usize, detail: String },
    #[error("{0} variables does not correspond to any registry size n_t(n_t+3)")]
    UnrecognizedVariableCount(usize),
}

/// Canonical variable layout for `n_t` real debris.
///
/// Edge variables come first in lexicographic `(i, j)` order over ordered
/// pairs with `i ≠ j` (so row `i` contributes `n_t` entries with `j` skipping
/// `i`), followed by the departure slacks `s4_1..s4_{n_t}`, then the arrival
/// slacks `s5_1..s5_{n_t}` — `n_t(n_t+3)` variables in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariableRegistry {
    n_t: usize,
}

/// Builds the canonical registry for `n_t` real debris (`n_t >= 1`).
pub fn build_registry(n_t: usize) -> VariableRegistry {
    VariableRegistry::new(n_t)
}

impl VariableRegistry {
    pub fn new(n_t: usize) -> Self {
        assert!(n_t >= 1, "a registry needs at least one real debris");
        VariableRegistry { n_t }
    }

    /// Recovers the registry from a total variable count, when one exists.
    pub fn from_n_vars(n_vars: usize) -> Option<Self> {
        let n_t = (((9.0 + 4.0 * n_vars as f64).sqrt() - 3.0) / 2.0).round() as usize;
        (n_t >= 1 && n_t * (n_t + 3) == n_vars).then(|| Self::new(n_t))
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Number of edge variables, `n_t(n_t+1)`.
    pub fn n_edges(&self) -> usize {
        self.n_t * (self.n_t + 1)
    }

    /// Total variable count, `n_t(n_t+3)`.
    pub fn n_vars(&self) -> usize {
        self.n_t * (self.n_t + 3)
    }

    /// Index of the edge variable `x_{i,j}`; `i ≠ j`, both in `0..=n_t`.
    pub fn edge(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j && i <= self.n_t && j <= self.n_t);
        i * self.n_t + if j < i { j } else { j - 1 }
    }

    /// Index of the departure slack `s4_i`; `i` in `1..=n_t`.
    pub fn slack_out(&self, i: usize) -> usize {
        debug_assert!((1..=self.n_t).contains(&i));
        self.n_edges() + (i - 1)
    }

    /// Index of the arrival slack `s5_i`; `i` in `1..=n_t`.
    pub fn slack_in(&self, i: usize) -> usize {
        debug_assert!((1..=self.n_t).contains(&i));
        self.n_edges() + self.n_t + (i - 1)
    }

    /// Endpoints `(i, j)` when `index` is an edge variable.
    pub fn edge_endpoints(&self, index: usize) -> Option<(usize, usize)> {
        (index < self.n_edges()).then(|| {
            let i = index / self.n_t;
            let r = index % self.n_t;
            (i, if r < i { r } else { r + 1 })
        })
    }

    /// Display name of a variable: `x_i_j`, `s4_i`, or `s5_i`.
    pub fn name(&self, index: usize) -> String {
        assert!(index < self.n_vars(), "variable {index} out of range");
        if let Some((i, j)) = self.edge_endpoints(index) {
            format!("x_{i}_{j}")
        } else if index < self.n_edges() + self.n_t {
            format!("s4_{}", index - self.n_edges() + 1)
        } else {
            format!("s5_{}", index - self.n_edges() - self.n_t + 1)
        }
    }

    /// Inverse of [`name`](Self::name); `None` for unknown names.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        if let Some(rest) = name.strip_prefix("x_") {
            let (i, j) = rest.split_once('_')?;
            let (i, j): (usize, usize) = (i.parse().ok()?, j.parse().ok()?);
            (i != j && i <= self.n_t && j <= self.n_t).then(|| self.edge(i, j))
        } else if let Some(rest) = name.strip_prefix("s4_") {
            let i: usize = rest.parse().ok()?;
            (1..=self.n_t).contains(&i).then(|| self.slack_out(i))
        } else if let Some(rest) = name.strip_prefix("s5_") {
            let i: usize = rest.parse().ok()?;
            (1..=self.n_t).contains(&i).then(|| self.slack_in(i))
        } else {
            None
        }
    }
}

/// Penalty weights for the eight constraint families plus the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeWeights {
    pub l_h: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub l5: f64,
    pub l6: f64,
    pub l7: f64,
    pub l8: f64,
}

impl Default for LagrangeWeights {
    /// The weight set validated on the artificial instance family. `l_h = 1`
    /// keeps model energy directly readable as propellant cost for
    /// constraint-satisfying assignments.
    fn default() -> Self {
        LagrangeWeights {
            l_h: 1.0,
            l1: 2500.0,
            l2: 300.0,
            l3: 300.0,
            l4: 300.0,
            l5: 300.0,
            l6: 2500.0,
            l7: 4000.0,
            l8: 5000.0,
        }
    }
}

impl LagrangeWeights {
    fn check(&self) -> Result<(), QuboError> {
        let named = [
            ("l_h", self.l_h),
            ("l1", self.l1),
            ("l2", self.l2),
            ("l3", self.l3),
            ("l4", self.l4),
            ("l5", self.l5),
            ("l6", self.l6),
            ("l7", self.l7),
            ("l8", self.l8),
        ];
        for (name, value) in named {
            if !(value >= 0.0) {
                return Err(QuboError::NegativeWeight { name, value });
            }
        }
        Ok(())
    }
}

/// A squared penalty group `weight · (Σ coeff·x + bias)²` in factored form;
/// memberships live on [`Structure`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Group {
    pub weight: f64,
    pub bias: f64,
}

/// Factored view of the model kept alongside the flat coefficients: linear
/// objective terms, sparse product couplings (backtrack/timing penalties),
/// and rank-one squared groups. Incremental solvers get O(memberships)
/// flip updates from this instead of touching the dense expansion.
#[derive(Debug, Clone)]
pub(crate) struct Structure {
    pub linear: Vec<f64>,
    /// Symmetric adjacency of plain product couplings: `pairs[v]` holds
    /// `(partner, weight)`.
    pub pairs: Vec<Vec<(u32, f64)>>,
    pub groups: Vec<Group>,
    /// Per-variable group memberships `(group index, coefficient)`.
    pub memberships: Vec<Vec<(u32, f64)>>,
}

/// Sparse upper-triangular quadratic model over the canonical registry.
///
/// Energy of a bit vector `x` is `offset + Σ_{i<=j} Q[i][j]·x_i·x_j`.
/// Immutable after build; evaluation is pure and safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct QuboModel {
    registry: VariableRegistry,
    /// Sorted by packed `(i, j)` key, `i <= j`, zero entries dropped.
    coefficients: Vec<(u64, f64)>,
    offset: f64,
    pub(crate) structure: Option<Structure>,
}

fn pack(i: usize, j: usize) -> u64 {
    ((i as u64) << 32) | j as u64
}

pub(crate) fn unpack(key: u64) -> (usize, usize) {
    ((key >> 32) as usize, (key & 0xffff_ffff) as usize)
}

impl QuboModel {
    pub fn registry(&self) -> &VariableRegistry {
        &self.registry
    }

    pub fn n_vars(&self) -> usize {
        self.registry.n_vars()
    }

    /// Constant carried out of the squared-penalty expansion.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Nonzero coefficients as `(i, j, value)` with `i <= j`, ascending.
    pub fn coefficients(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.coefficients.iter().map(|&(key, v)| {
            let (i, j) = unpack(key);
            (i, j, v)
        })
    }

    pub fn n_terms(&self) -> usize {
        self.coefficients.len()
    }

    /// Energy `offset + Σ Q_ij x_i x_j` of one assignment.
    pub fn energy(&self, bits: &[bool]) -> f64 {
        assert_eq!(
            bits.len(),
            self.n_vars(),
            "bit vector length must match the registry"
        );
        let mut e = self.offset;
        for &(key, v) in &self.coefficients {
            let (i, j) = unpack(key);
            if bits[i] && bits[j] {
                e += v;
            }
        }
        e
    }

    /// Rebuilds a model from raw parts (import path): coefficients are
    /// normalized to `i <= j`, merged, sorted, and zero entries dropped. No
    /// factored structure is attached.
    pub(crate) fn from_parts(
        registry: VariableRegistry,
        raw: Vec<(usize, usize, f64)>,
        offset: f64,
    ) -> QuboModel {
        let mut acc: Vec<(u64, f64)> = raw
            .into_iter()
            .map(|(i, j, v)| (if i <= j { pack(i, j) } else { pack(j, i) }, v))
            .collect();
        compact(&mut acc);
        QuboModel {
            registry,
            coefficients: acc,
            offset,
            structure: None,
        }
    }
}

/// Sorts by key, merges duplicates, and drops entries that sum to exactly
/// zero.
fn compact(acc: &mut Vec<(u64, f64)>) {
    acc.sort_unstable_by_key(|&(key, _)| key);
    let mut write = 0;
    let mut read = 0;
    while read < acc.len() {
        let (key, mut sum) = acc[read];
        read += 1;
        while read < acc.len() && acc[read].0 == key {
            sum += acc[read].1;
            read += 1;
        }
        if sum != 0.0 {
            acc[write] = (key, sum);
            write += 1;
        }
    }
    acc.truncate(write);
    acc.shrink_to_fit();
}

/// Expands the objective and all eight penalty families over `instance`
/// into a [`QuboModel`], keeping both the flat coefficient map and the
/// factored structure used by incremental solvers.
pub fn build_qubo(
    instance: &ProblemInstance,
    weights: &LagrangeWeights,
) -> Result<QuboModel, QuboError> {
    weights.check()?;
    let reg = VariableRegistry::new(instance.n_t);
    let n_t = instance.n_t;
    let n_vars = reg.n_vars();
    let n_edges = reg.n_edges();

    // Every squared group of m members expands to m diagonal entries plus
    // m(m-1)/2 products; reserve for the dominant all-edges group plus a
    // cubic allowance for the per-node families.
    let estimate = n_edges * (n_edges - 1) / 2 + 4 * n_edges + 8 * n_t * n_t * (n_t + 1);
    let mut acc: Vec<(u64, f64)> = Vec::with_capacity(estimate);
    let mut offset = 0.0;

    let mut structure = Structure {
        linear: vec![0.0; n_vars],
        pairs: vec![Vec::new(); n_vars],
        groups: Vec::new(),
        memberships: vec![Vec::new(); n_vars],
    };

    // Objective: each taken edge pays its transfer plus the departure
    // node's disposal.
    for i in 0..=n_t {
        for j in 0..=n_t {
            if i == j {
                continue;
            }
            let v = weights.l_h * (instance.c[i][j] + instance.disposal[i]);
            let e = reg.edge(i, j);
            structure.linear[e] = v;
            if v != 0.0 {
                acc.push((pack(e, e), v));
            }
        }
    }

    // Squared group expansion: w(Σ u·x + b)² contributes w·u(u+2b) on each
    // diagonal, 2w·u_a·u_b on each product, and w·b² to the offset.
    let mut push_group = |acc: &mut Vec<(u64, f64)>,
                          structure: &mut Structure,
                          weight: f64,
                          bias: f64,
                          members: &[(usize, f64)]| {
        if weight == 0.0 {
            return;
        }
        let g = structure.groups.len() as u32;
        structure.groups.push(Group { weight, bias });
        for (a, &(va, ua)) in members.iter().enumerate() {
            structure.memberships[va].push((g, ua));
            acc.push((pack(va, va), weight * ua * (ua + 2.0 * bias)));
            for &(vb, ub) in &members[a + 1..] {
                let (lo, hi) = if va <= vb { (va, vb) } else { (vb, va) };
                acc.push((pack(lo, hi), 2.0 * weight * ua * ub));
            }
        }
        offset += weight * bias * bias;
    };

    // C1: the tour takes exactly n_s + 1 edges.
    let all_edges: Vec<(usize, f64)> = (0..n_edges).map(|e| (e, 1.0)).collect();
    push_group(
        &mut acc,
        &mut structure,
        weights.l1,
        -((instance.n_s + 1) as f64),
        &all_edges,
    );

    // C2/C3: exactly one departure from and one arrival at the dummy node.
    let dummy_out: Vec<(usize, f64)> = (1..=n_t).map(|j| (reg.edge(0, j), 1.0)).collect();
    push_group(&mut acc, &mut structure, weights.l2, -1.0, &dummy_out);
    let dummy_in: Vec<(usize, f64)> = (1..=n_t).map(|j| (reg.edge(j, 0), 1.0)).collect();
    push_group(&mut acc, &mut structure, weights.l3, -1.0, &dummy_in);

    // C4/C5: each real node departs and arrives at most once, written as an
    // equality through one binary slack per node and direction.
    for i in 1..=n_t {
        let mut out: Vec<(usize, f64)> = (0..=n_t)
            .filter(|&j| j != i)
            .map(|j| (reg.edge(i, j), 1.0))
            .collect();
        out.push((reg.slack_out(i), 1.0));
        push_group(&mut acc, &mut structure, weights.l4, -1.0, &out);

        let mut inc: Vec<(usize, f64)> = (0..=n_t)
            .filter(|&j| j != i)
            .map(|j| (reg.edge(j, i), 1.0))
            .collect();
        inc.push((reg.slack_in(i), 1.0));
        push_group(&mut acc, &mut structure, weights.l5, -1.0, &inc);
    }

    // C6: arrivals balance departures at every real node.
    for j in 1..=n_t {
        let mut flow: Vec<(usize, f64)> = Vec::with_capacity(2 * n_t);
        for k in 0..=n_t {
            if k != j {
                flow.push((reg.edge(k, j), 1.0));
                flow.push((reg.edge(j, k), -1.0));
            }
        }
        push_group(&mut acc, &mut structure, weights.l6, 0.0, &flow);
    }

    // Plain product couplings, mirrored into the factored adjacency.
    let mut push_pair = |acc: &mut Vec<(u64, f64)>, structure: &mut Structure, a: usize, b: usize, w: f64| {
        if w == 0.0 {
            return;
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        acc.push((pack(lo, hi), w));
        structure.pairs[a].push((b as u32, w));
        structure.pairs[b].push((a as u32, w));
    };

    // C7: an edge and its reverse never appear together (the dummy node
    // included, which is what rules out two-leg out-and-back tours).
    for i in 0..=n_t {
        for j in (i + 1)..=n_t {
            push_pair(
                &mut acc,
                &mut structure,
                reg.edge(i, j),
                reg.edge(j, i),
                weights.l7,
            );
        }
    }

    // C8: consecutive legs must leave the servicing dwell between alignment
    // epochs; pairs whose chained timing is impossible are penalized. The
    // inequality is strict, so an exactly-on-time chain stays allowed.
    for j in 1..=n_t {
        for i in 0..=n_t {
            if i == j {
                continue;
            }
            for k in 0..=n_t {
                if k == j || k == i {
                    continue;
                }
                if instance.t[i][j] + instance.t_s > instance.t[j][k] {
                    push_pair(
                        &mut acc,
                        &mut structure,
                        reg.edge(i, j),
                        reg.edge(j, k),
                        weights.l8,
                    );
                }
            }
        }
    }

    compact(&mut acc);
    Ok(QuboModel {
        registry: reg,
        coefficients: acc,
        offset,
        structure: Some(structure),
    })
}

/// Objective value and unweighted per-constraint penalties of one
/// assignment, evaluated from the defining sums rather than the expanded
/// model.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyBreakdown {
    /// Objective (propellant cost of the taken edges).
    pub h: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    /// `l_h·h + Σ l_k·c_k`; matches model energy to rounding.
    pub weighted_total: f64,
}

impl PenaltyBreakdown {
    /// The eight penalties as an array, `c1` first.
    pub fn constraints(&self) -> [f64; 8] {
        [
            self.c1, self.c2, self.c3, self.c4, self.c5, self.c6, self.c7, self.c8,
        ]
    }
}

/// Evaluates the objective and each penalty family directly from its
/// definition. Agreement with [`QuboModel::energy`] is the standing check
/// that the expansion is correct.
pub fn penalty_breakdown(
    instance: &ProblemInstance,
    weights: &LagrangeWeights,
    bits: &[bool],
) -> PenaltyBreakdown {
    let reg = VariableRegistry::new(instance.n_t);
    assert_eq!(
        bits.len(),
        reg.n_vars(),
        "bit vector length must match the registry"
    );
    let n_t = instance.n_t;
    let x = |i: usize, j: usize| bits[reg.edge(i, j)] as u32 as f64;

    let mut h = 0.0;
    let mut edge_count = 0.0;
    for i in 0..=n_t {
        for j in 0..=n_t {
            if i == j {
                continue;
            }
            let taken = x(i, j);
            h += taken * (instance.c[i][j] + instance.disposal[i]);
            edge_count += taken;
        }
    }
    let c1 = (edge_count - (instance.n_s + 1) as f64).powi(2);

    let c2 = ((1..=n_t).map(|j| x(0, j)).sum::<f64>() - 1.0).powi(2);
    let c3 = ((1..=n_t).map(|j| x(j, 0)).sum::<f64>() - 1.0).powi(2);

    let mut c4 = 0.0;
    let mut c5 = 0.0;
    let mut c6 = 0.0;
    for i in 1..=n_t {
        let out: f64 = (0..=n_t).filter(|&j| j != i).map(|j| x(i, j)).sum();
        let inc: f64 = (0..=n_t).filter(|&j| j != i).map(|j| x(j, i)).sum();
        c4 += (out + bits[reg.slack_out(i)] as u32 as f64 - 1.0).powi(2);
        c5 += (inc + bits[reg.slack_in(i)] as u32 as f64 - 1.0).powi(2);
        c6 += (inc - out).powi(2);
    }

    let mut c7 = 0.0;
    for i in 0..=n_t {
        for j in (i + 1)..=n_t {
            c7 += x(i, j) * x(j, i);
        }
    }

    let mut c8 = 0.0;
    for j in 1..=n_t {
        for i in 0..=n_t {
            if i == j {
                continue;
            }
            for k in 0..=n_t {
                if k == j || k == i {
                    continue;
                }
                if instance.t[i][j] + instance.t_s > instance.t[j][k] {
                    c8 += x(i, j) * x(j, k);
                }
            }
        }
    }

    let weighted_total = weights.l_h * h
        + weights.l1 * c1
        + weights.l2 * c2
        + weights.l3 * c3
        + weights.l4 * c4
        + weights.l5 * c5
        + weights.l6 * c6
        + weights.l7 * c7
        + weights.l8 * c8;
    PenaltyBreakdown {
        h,
        c1,
        c2,
        c3,
        c4,
        c5,
        c6,
        c7,
        c8,
        weighted_total,
    }
}
