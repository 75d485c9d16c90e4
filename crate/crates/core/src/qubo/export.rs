//! Plain-text interchange format for built models.
//!
//! The layout follows the DIMACS habit: an optional run of `c` comment
//! lines, one `p qubo <n_vars> <n_terms> <offset>` header, then one
//! `i j value` line per nonzero coefficient with `i <= j`, sorted. A
//! sidecar text maps variable indices back to their registry names so a
//! solution file from an external solver can be decoded without the
//! original instance.

use super::{QuboError, QuboModel, VariableRegistry};
use std::fmt::Write as _;

/// Rendered model plus the index-to-name sidecar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuboExport {
    /// `p qubo` header and coefficient lines.
    pub model: String,
    /// One `index name` line per variable, ascending.
    pub names: String,
}

/// Renders `model` deterministically: identical models produce
/// byte-identical text. Floats use the shortest representation that parses
/// back to the same value, so an export/import cycle is lossless.
pub fn export_qubo(model: &QuboModel) -> QuboExport {
    let mut text = String::new();
    writeln!(
        text,
        "p qubo {} {} {}",
        model.n_vars(),
        model.n_terms(),
        model.offset()
    )
    .expect("writing to a String cannot fail");
    for (i, j, v) in model.coefficients() {
        writeln!(text, "{i} {j} {v}").expect("writing to a String cannot fail");
    }
    let mut names = String::new();
    for idx in 0..model.n_vars() {
        writeln!(names, "{idx} {}", model.registry().name(idx))
            .expect("writing to a String cannot fail");
    }
    QuboExport { model: text, names }
}

/// Parses text produced by [`export_qubo`] (or a compatible writer) back
/// into a model. Comment lines are tolerated anywhere, coefficients may
/// arrive unsorted or transposed, and duplicates are merged; the registry
/// is recovered from the variable count, which must equal `n_t(n_t+3)` for
/// some `n_t`. The reconstructed model evaluates energies but carries no
/// factored structure.
pub fn import_qubo(text: &str) -> Result<QuboModel, QuboError> {
    let mut header: Option<(usize, usize, f64)> = None;
    let mut raw: Vec<(usize, usize, f64)> = Vec::new();
    let mut last_line = 0;

    for (line_no, line) in text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())) {
        last_line = line_no;
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        let malformed = |detail: String| QuboError::Malformed {
            line: line_no,
            detail,
        };
        match header {
            None => {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 5 || fields[0] != "p" || fields[1] != "qubo" {
                    return Err(malformed(format!(
                        "expected `p qubo <n_vars> <n_terms> <offset>`, got {line:?}"
                    )));
                }
                let n_vars: usize = fields[2]
                    .parse()
                    .map_err(|_| malformed(format!("bad variable count {:?}", fields[2])))?;
                let n_terms: usize = fields[3]
                    .parse()
                    .map_err(|_| malformed(format!("bad term count {:?}", fields[3])))?;
                let offset: f64 = fields[4]
                    .parse()
                    .map_err(|_| malformed(format!("bad offset {:?}", fields[4])))?;
                raw.reserve_exact(n_terms);
                header = Some((n_vars, n_terms, offset));
            }
            Some((n_vars, _, _)) => {
                let mut fields = line.split_whitespace();
                let mut index = |what: &str| -> Result<usize, QuboError> {
                    fields
                        .next()
                        .ok_or_else(|| QuboError::Malformed {
                            line: line_no,
                            detail: format!("missing {what}"),
                        })?
                        .parse()
                        .map_err(|_| QuboError::Malformed {
                            line: line_no,
                            detail: format!("bad {what}"),
                        })
                };
                let i = index("row index")?;
                let j = index("column index")?;
                let value: f64 = fields
                    .next()
                    .ok_or_else(|| malformed("missing coefficient value".into()))?
                    .parse()
                    .map_err(|_| malformed("bad coefficient value".into()))?;
                if fields.next().is_some() {
                    return Err(malformed(format!("trailing fields in {line:?}")));
                }
                if i >= n_vars || j >= n_vars {
                    return Err(malformed(format!(
                        "index out of range in {line:?} (model has {n_vars} variables)"
                    )));
                }
                raw.push((i, j, value));
            }
        }
    }

    let (n_vars, n_terms, offset) = header.ok_or(QuboError::Malformed {
        line: last_line,
        detail: "no `p qubo` header line found".into(),
    })?;
    if raw.len() != n_terms {
        return Err(QuboError::Malformed {
            line: last_line,
            detail: format!(
                "header promises {n_terms} coefficient lines, found {}",
                raw.len()
            ),
        });
    }
    let registry = VariableRegistry::from_n_vars(n_vars)
        .ok_or(QuboError::UnrecognizedVariableCount(n_vars))?;
    Ok(QuboModel::from_parts(registry, raw, offset))
}
