//! Problem-instance container: the alignment-epoch and cost tables that fully
//! describe one planning problem, with the dummy-node conventions applied.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Comparison slack for table invariants (symmetry, dummy conventions).
const TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("{what} has {got} entries, expected {expected} for n_t = {n_t}")]
    Dimension {
        what: &'static str,
        got: usize,
        expected: usize,
        n_t: usize,
    },
    #[error("need 1 <= n_s <= n_t, got n_s = {n_s} with n_t = {n_t}")]
    SelectionCount { n_s: usize, n_t: usize },
    #[error("mission deadline t_max must be positive, got {0}")]
    NonPositiveDeadline(f64),
    #[error("servicing time t_s must be nonnegative, got {0}")]
    NegativeServiceTime(f64),
    #[error("{table}[{i}][{j}] = {a} but {table}[{j}][{i}] = {b}; tables must be symmetric")]
    Asymmetric {
        table: char,
        i: usize,
        j: usize,
        a: f64,
        b: f64,
    },
    #[error("{table}[{i}][{i}] = {value}, diagonal entries must be zero")]
    NonzeroDiagonal { table: char, i: usize, value: f64 },
    #[error("{entry} = {value} violates the dummy-node conventions")]
    DummyConvention { entry: String, value: f64 },
    #[error("{entry} = {value}, but every time and cost must be finite and nonnegative")]
    BadEntry { entry: String, value: f64 },
    #[error("instance document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// One planning problem: `n_s` of `n_t` debris must be visited before
/// `t_max`, dwelling `t_s` days at each, with all pairwise data precomputed.
///
/// Node 0 is the dummy start/end node; real debris occupy indices `1..=n_t`.
/// Conventions on row/column 0: `t[0][i] = 0` (the tour may begin anywhere at
/// the reference time), `t[i][0] = t_max` (the return edge carries the
/// deadline), `c[0][i] = c[i][0] = 0` and `disposal[0] = 0` (the dummy node
/// costs nothing).
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    /// Number of real debris.
    pub n_t: usize,
    /// Number of debris the mission must visit.
    pub n_s: usize,
    /// Mission deadline, days from the reference time.
    pub t_max: f64,
    /// On-orbit servicing dwell per debris, days.
    pub t_s: f64,
    /// Names of the real debris; entry `k` names node `k + 1`.
    pub labels: Vec<String>,
    /// Pairwise alignment epochs `T[i][j]`, days, `(n_t+1)²` with dummy row 0.
    pub t: Vec<Vec<f64>>,
    /// Pairwise transfer costs `C[i][j]` (m/s for real catalogs).
    pub c: Vec<Vec<f64>>,
    /// Per-node disposal costs, length `n_t + 1`.
    pub disposal: Vec<f64>,
}

/// On-disk JSON form. `T`/`C` are flattened row-major; `includes_dummy`
/// says whether they already carry the dummy row/column or only the
/// real-debris block (in which case the conventions are synthesized on load).
#[derive(Serialize, Deserialize)]
struct InstanceDocument {
    n_t: usize,
    n_s: usize,
    t_max: f64,
    t_s: f64,
    labels: Vec<String>,
    #[serde(default)]
    includes_dummy: bool,
    #[serde(rename = "T")]
    t: Vec<f64>,
    #[serde(rename = "C")]
    c: Vec<f64>,
    #[serde(rename = "c")]
    disposal: Vec<f64>,
}

fn approx(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * f64::max(1.0, f64::max(a.abs(), b.abs()))
}

impl ProblemInstance {
    /// Builds an instance from full `(n_t+1)²` tables (dummy row/column
    /// included) and checks every invariant.
    pub fn new(
        n_s: usize,
        t_max: f64,
        t_s: f64,
        labels: Vec<String>,
        t: Vec<Vec<f64>>,
        c: Vec<Vec<f64>>,
        disposal: Vec<f64>,
    ) -> Result<Self, InstanceError> {
        let n_t = labels.len();
        let instance = ProblemInstance {
            n_t,
            n_s,
            t_max,
            t_s,
            labels,
            t,
            c,
            disposal,
        };
        instance.check()?;
        Ok(instance)
    }

    /// Builds an instance from real-debris-only `n_t × n_t` tables, adding
    /// the dummy row, column, and disposal entry per the node-0 conventions.
    pub fn from_real_tables(
        n_s: usize,
        t_max: f64,
        t_s: f64,
        labels: Vec<String>,
        t_real: Vec<Vec<f64>>,
        c_real: Vec<Vec<f64>>,
        disposal_real: Vec<f64>,
    ) -> Result<Self, InstanceError> {
        let n_t = labels.len();
        let n = n_t + 1;
        let mut t = vec![vec![0.0; n]; n];
        let mut c = vec![vec![0.0; n]; n];
        let mut disposal = vec![0.0; n];
        for (i, row) in t_real.iter().enumerate() {
            if row.len() != n_t {
                return Err(InstanceError::Dimension {
                    what: "a row of T",
                    got: row.len(),
                    expected: n_t,
                    n_t,
                });
            }
            t[i + 1][1..].copy_from_slice(row);
            t[i + 1][0] = t_max;
        }
        if t_real.len() != n_t {
            return Err(InstanceError::Dimension {
                what: "T",
                got: t_real.len(),
                expected: n_t,
                n_t,
            });
        }
        for (i, row) in c_real.iter().enumerate() {
            if row.len() != n_t {
                return Err(InstanceError::Dimension {
                    what: "a row of C",
                    got: row.len(),
                    expected: n_t,
                    n_t,
                });
            }
            c[i + 1][1..].copy_from_slice(row);
        }
        if c_real.len() != n_t {
            return Err(InstanceError::Dimension {
                what: "C",
                got: c_real.len(),
                expected: n_t,
                n_t,
            });
        }
        if disposal_real.len() != n_t {
            return Err(InstanceError::Dimension {
                what: "c",
                got: disposal_real.len(),
                expected: n_t,
                n_t,
            });
        }
        disposal[1..].copy_from_slice(&disposal_real);
        Self::new(n_s, t_max, t_s, labels, t, c, disposal)
    }

    /// Total node count including the dummy node.
    pub fn n_nodes(&self) -> usize {
        self.n_t + 1
    }

    /// Name of real node `i` (`1..=n_t`).
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i - 1]
    }

    fn check(&self) -> Result<(), InstanceError> {
        let n = self.n_t + 1;
        if self.n_s < 1 || self.n_s > self.n_t {
            return Err(InstanceError::SelectionCount {
                n_s: self.n_s,
                n_t: self.n_t,
            });
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(InstanceError::NonPositiveDeadline(self.t_max));
        }
        if !(self.t_s >= 0.0) || !self.t_s.is_finite() {
            return Err(InstanceError::NegativeServiceTime(self.t_s));
        }
        for (what, rows) in [("T", &self.t), ("C", &self.c)] {
            if rows.len() != n {
                return Err(InstanceError::Dimension {
                    what,
                    got: rows.len(),
                    expected: n,
                    n_t: self.n_t,
                });
            }
            for row in rows.iter() {
                if row.len() != n {
                    return Err(InstanceError::Dimension {
                        what,
                        got: row.len(),
                        expected: n,
                        n_t: self.n_t,
                    });
                }
            }
        }
        if self.disposal.len() != n {
            return Err(InstanceError::Dimension {
                what: "c",
                got: self.disposal.len(),
                expected: n,
                n_t: self.n_t,
            });
        }
        for i in 0..n {
            for j in 0..n {
                for (table, v) in [('T', self.t[i][j]), ('C', self.c[i][j])] {
                    if !v.is_finite() || v < 0.0 {
                        return Err(InstanceError::BadEntry {
                            entry: format!("{table}[{i}][{j}]"),
                            value: v,
                        });
                    }
                }
            }
            let d = self.disposal[i];
            if !d.is_finite() || d < 0.0 {
                return Err(InstanceError::BadEntry {
                    entry: format!("c[{i}]"),
                    value: d,
                });
            }
            for (table, value) in [('T', self.t[i][i]), ('C', self.c[i][i])] {
                if value != 0.0 {
                    return Err(InstanceError::NonzeroDiagonal { table, i, value });
                }
            }
        }
        // Real-to-real blocks must be symmetric; the dummy row/column is not
        // (t[0][i] = 0 while t[i][0] = t_max) and is checked separately.
        for i in 1..n {
            for j in (i + 1)..n {
                if !approx(self.t[i][j], self.t[j][i]) {
                    return Err(InstanceError::Asymmetric {
                        table: 'T',
                        i,
                        j,
                        a: self.t[i][j],
                        b: self.t[j][i],
                    });
                }
                if !approx(self.c[i][j], self.c[j][i]) {
                    return Err(InstanceError::Asymmetric {
                        table: 'C',
                        i,
                        j,
                        a: self.c[i][j],
                        b: self.c[j][i],
                    });
                }
            }
        }
        for i in 1..n {
            for (entry, value, want) in [
                (format!("T[0][{i}]"), self.t[0][i], 0.0),
                (format!("T[{i}][0]"), self.t[i][0], self.t_max),
                (format!("C[0][{i}]"), self.c[0][i], 0.0),
                (format!("C[{i}][0]"), self.c[i][0], 0.0),
            ] {
                if !approx(value, want) {
                    return Err(InstanceError::DummyConvention { entry, value });
                }
            }
        }
        if self.disposal[0] != 0.0 {
            return Err(InstanceError::DummyConvention {
                entry: "c[0]".into(),
                value: self.disposal[0],
            });
        }
        Ok(())
    }

    /// Parses the JSON instance document, synthesizing the dummy row/column
    /// when the document carries only the real-debris block.
    pub fn from_json_str(text: &str) -> Result<Self, InstanceError> {
        let doc: InstanceDocument = serde_json::from_str(text)?;
        let n = if doc.includes_dummy {
            doc.n_t + 1
        } else {
            doc.n_t
        };
        for (what, flat) in [("T", &doc.t), ("C", &doc.c)] {
            if flat.len() != n * n {
                return Err(InstanceError::Dimension {
                    what,
                    got: flat.len(),
                    expected: n * n,
                    n_t: doc.n_t,
                });
            }
        }
        if doc.labels.len() != doc.n_t {
            return Err(InstanceError::Dimension {
                what: "labels",
                got: doc.labels.len(),
                expected: doc.n_t,
                n_t: doc.n_t,
            });
        }
        let unflatten = |flat: &[f64]| -> Vec<Vec<f64>> {
            flat.chunks(n).map(|chunk| chunk.to_vec()).collect()
        };
        if doc.includes_dummy {
            Self::new(
                doc.n_s,
                doc.t_max,
                doc.t_s,
                doc.labels,
                unflatten(&doc.t),
                unflatten(&doc.c),
                doc.disposal,
            )
        } else {
            Self::from_real_tables(
                doc.n_s,
                doc.t_max,
                doc.t_s,
                doc.labels,
                unflatten(&doc.t),
                unflatten(&doc.c),
                doc.disposal,
            )
        }
    }

    /// Serializes to the JSON document form with the dummy row/column
    /// included explicitly.
    pub fn to_json_string(&self) -> String {
        let flatten = |rows: &[Vec<f64>]| -> Vec<f64> {
            rows.iter().flat_map(|r| r.iter().copied()).collect()
        };
        let doc = InstanceDocument {
            n_t: self.n_t,
            n_s: self.n_s,
            t_max: self.t_max,
            t_s: self.t_s,
            labels: self.labels.clone(),
            includes_dummy: true,
            t: flatten(&self.t),
            c: flatten(&self.c),
            disposal: self.disposal.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("instance document serializes")
    }
}
