//! File formats: the matrix-set JSON document, DIMACS CNF and the set
//! cover JSON document.
//!
//! A matrix-set document is `{"n": int, "matrices": [[[entries]]], "labels":
//! [..]}`. A matrix whose entries are all 0 or 1 is read as a bit pattern
//! directly; anything else must be a stochastic matrix and is reduced to its
//! zero pattern under the caller's tolerance. Documents written by the
//! `reduce` command additionally carry a `"threshold"` field.

use crate::error::{Error, Result};
use crate::pattern::{default_label, BooleanPattern, MatrixSet, StochasticMatrix};
use crate::reductions::{CnfFormula, SetCoverInstance};
use serde::{Deserialize, Serialize};
use serde_json::Number;

/// Version tag of the matrix-set JSON schema.
pub const MATRIX_SET_SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSetDoc {
    pub n: usize,
    pub matrices: Vec<Vec<Vec<Number>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u64>,
}

impl MatrixSetDoc {
    /// Renders a set as a document of 0/1 bit matrices.
    pub fn from_set(set: &MatrixSet) -> Self {
        let n = set.n();
        let matrices = set
            .patterns()
            .iter()
            .map(|p| {
                (0..n)
                    .map(|i| (0..n).map(|j| Number::from(u8::from(p.bit(i, j)))).collect())
                    .collect()
            })
            .collect();
        MatrixSetDoc { n, matrices, labels: Some(set.labels().to_vec()), threshold: None }
    }

    /// Renders a set with uniform stochastic representatives: every row
    /// splits its mass evenly over its support.
    pub fn from_set_uniform(set: &MatrixSet) -> Result<Self> {
        let n = set.n();
        let mut matrices = Vec::with_capacity(set.len());
        for p in set.patterns() {
            let m = StochasticMatrix::uniform_from_pattern(p)?;
            matrices.push(
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let v = m.get(i, j);
                                if v == v.trunc() {
                                    Number::from(v as u64)
                                } else {
                                    Number::from_f64(v).expect("finite entry")
                                }
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        Ok(MatrixSetDoc { n, matrices, labels: Some(set.labels().to_vec()), threshold: None })
    }

    /// Interprets the document as a pattern set. All-0/1 matrices become
    /// patterns directly; numeric matrices are validated as stochastic and
    /// reduced via the zero tolerance.
    pub fn to_matrix_set(&self, zero_tolerance: f64) -> Result<MatrixSet> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Parse("matrix dimension must be at least 1".into()));
        }
        let mut patterns = Vec::with_capacity(self.matrices.len());
        for (mi, rows) in self.matrices.iter().enumerate() {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Parse(format!(
                    "matrix {} is not {n}x{n}",
                    mi + 1
                )));
            }
            let mut entries = Vec::with_capacity(n * n);
            for row in rows {
                for e in row {
                    let v = e.as_f64().ok_or_else(|| {
                        Error::Parse(format!("matrix {} holds a non-numeric entry", mi + 1))
                    })?;
                    entries.push(v);
                }
            }
            let all_bits = entries.iter().all(|&v| v == 0.0 || v == 1.0);
            let pattern = if all_bits {
                BooleanPattern::from_fn(n, |i, j| entries[i * n + j] == 1.0)
            } else {
                StochasticMatrix::new(n, entries)?.pattern(zero_tolerance)?
            };
            patterns.push(pattern);
        }
        let labels = match &self.labels {
            Some(l) => l.clone(),
            None => (0..patterns.len()).map(default_label).collect(),
        };
        MatrixSet::with_labels(patterns, labels)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

pub fn parse_matrix_set_doc(input: &str) -> Result<MatrixSetDoc> {
    serde_json::from_str(input).map_err(|e| Error::Parse(format!("matrix-set JSON: {e}")))
}

/// Set cover document: `{"universe": n, "sets": [[1-based elements]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetCoverDoc {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetCoverDoc {
    pub fn to_instance(&self) -> Result<SetCoverInstance> {
        let mut family = Vec::with_capacity(self.sets.len());
        for (si, set) in self.sets.iter().enumerate() {
            let mut converted = Vec::with_capacity(set.len());
            for &e in set {
                if e == 0 {
                    return Err(Error::InvalidSetCover(format!(
                        "set {} holds element 0; elements are 1-based",
                        si + 1
                    )));
                }
                converted.push(e - 1);
            }
            family.push(converted);
        }
        SetCoverInstance::new(self.universe, family)
    }

    pub fn from_instance(inst: &SetCoverInstance) -> Self {
        SetCoverDoc {
            universe: inst.universe_size(),
            sets: inst
                .family()
                .iter()
                .map(|s| s.iter().map(|&e| e + 1).collect())
                .collect(),
        }
    }
}

pub fn parse_set_cover_doc(input: &str) -> Result<SetCoverDoc> {
    serde_json::from_str(input).map_err(|e| Error::Parse(format!("set-cover JSON: {e}")))
}

/// Parses DIMACS CNF. Clauses must hold exactly three literals; shorter
/// clauses can be padded by repeating a literal.
pub fn parse_dimacs(input: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<[i32; 3]> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut clause_start_line = 0usize;

    for (lineno, raw) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse(format!("line {lineno}: duplicate problem line")));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[1] != "cnf" {
                return Err(Error::Parse(format!(
                    "line {lineno}: expected 'p cnf <vars> <clauses>'"
                )));
            }
            let vars = fields[2]
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad variable count")))?;
            let count = fields[3]
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad clause count")))?;
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(Error::Parse(format!(
                "line {lineno}: clause data before the problem line"
            )));
        };
        for token in line.split_whitespace() {
            let lit = token
                .parse::<i32>()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad literal '{token}'")))?;
            if lit == 0 {
                if current.len() != 3 {
                    return Err(Error::Parse(format!(
                        "clause ending on line {lineno} has {} literals; exactly 3 are required \
                         (pad shorter clauses by repeating a literal)",
                        current.len()
                    )));
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
            } else {
                if current.is_empty() {
                    clause_start_line = lineno;
                }
                if lit.unsigned_abs() as usize > vars {
                    return Err(Error::Parse(format!(
                        "line {lineno}: literal {lit} exceeds the declared {vars} variables"
                    )));
                }
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(Error::Parse(format!(
            "clause starting on line {clause_start_line} is not 0-terminated"
        )));
    }
    let Some((vars, declared)) = header else {
        return Err(Error::Parse("missing 'p cnf' problem line".into()));
    };
    if clauses.len() != declared {
        return Err(Error::Parse(format!(
            "header declares {declared} clauses but {} were found",
            clauses.len()
        )));
    }
    CnfFormula::new(vars, clauses)
}
