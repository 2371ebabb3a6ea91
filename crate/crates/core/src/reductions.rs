//! Hardness-reduction instance encoders.
//!
//! Both encoders turn a combinatorial instance into a matrix set whose
//! SIA-index answers the original question: a 3-SAT formula is satisfiable
//! iff the encoded set has an SIA product no longer than the variable
//! count, and the SIA-index of an encoded set-cover instance equals the
//! minimum cover size.

use crate::error::{Error, Result};
use crate::pattern::{BooleanPattern, MatrixSet};

/// A CNF formula with exactly three literals per clause. Literals are
/// signed 1-based variable indices (DIMACS convention).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    variable_count: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(variable_count: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        if variable_count == 0 {
            return Err(Error::InvalidFormula("formula needs at least one variable".into()));
        }
        if clauses.is_empty() {
            return Err(Error::InvalidFormula("formula needs at least one clause".into()));
        }
        for (ci, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > variable_count {
                    return Err(Error::InvalidFormula(format!(
                        "clause {} holds literal {} outside 1..={}",
                        ci + 1,
                        lit,
                        variable_count
                    )));
                }
            }
        }
        Ok(CnfFormula { variable_count, clauses })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// True iff the assignment (bit `i` = variable `i+1`) satisfies every
    /// clause.
    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize - 1;
                let value = assignment >> var & 1 == 1;
                if lit > 0 { value } else { !value }
            })
        })
    }
}

/// A set cover instance: a universe `{1, .., n}` and a family of subsets
/// whose union is the whole universe. Elements are stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe_size: usize,
    family: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    /// `family` uses 0-based elements in `0..universe_size`.
    pub fn new(universe_size: usize, family: Vec<Vec<usize>>) -> Result<Self> {
        if universe_size == 0 {
            return Err(Error::InvalidSetCover("universe must be non-empty".into()));
        }
        if family.is_empty() {
            return Err(Error::InvalidSetCover("family must hold at least one set".into()));
        }
        let mut covered = vec![false; universe_size];
        for (si, set) in family.iter().enumerate() {
            for &e in set {
                if e >= universe_size {
                    return Err(Error::InvalidSetCover(format!(
                        "set {} holds element {} outside the universe of size {}",
                        si + 1,
                        e + 1,
                        universe_size
                    )));
                }
                covered[e] = true;
            }
        }
        if let Some(missing) = covered.iter().position(|&c| !c) {
            return Err(Error::InvalidSetCover(format!(
                "element {} is not covered by any set",
                missing + 1
            )));
        }
        Ok(SetCoverInstance { universe_size, family })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }
}

/// Encodes a 3-SAT formula as a set of `2v` positive-diagonal patterns of
/// dimension `1 + v + c`, returned with the decision threshold `v`: the
/// formula is satisfiable iff the set has an SIA product of length at most
/// `v`.
///
/// State 0 is the sink column, states `1..=v` stand for the variables and
/// states `v+1..=v+c` for the clauses. The literal matrix for `X_i` (or its
/// negation) has ones on the diagonal, an edge from state `i` to the sink,
/// and an edge from each clause state whose clause the literal satisfies.
pub fn encode_3sat(f: &CnfFormula) -> (MatrixSet, u64) {
    let v = f.variable_count();
    let c = f.clauses().len();
    let dim = 1 + v + c;
    let mut patterns = Vec::with_capacity(2 * v);
    let mut labels = Vec::with_capacity(2 * v);
    for var in 1..=v {
        for positive in [true, false] {
            let lit = if positive { var as i32 } else { -(var as i32) };
            let p = BooleanPattern::from_fn(dim, |i, j| {
                if i == j {
                    return true;
                }
                if j != 0 {
                    return false;
                }
                if i == var {
                    return true;
                }
                i > v && clause_satisfied_by_literal(&f.clauses()[i - v - 1], lit)
            });
            patterns.push(p);
            labels.push(if positive { format!("X{var}") } else { format!("!X{var}") });
        }
    }
    let set = MatrixSet::with_labels(patterns, labels).unwrap();
    (set, v as u64)
}

fn clause_satisfied_by_literal(clause: &[i32; 3], lit: i32) -> bool {
    clause.contains(&lit)
}

/// Encodes a set cover instance as `|family|` automaton patterns of
/// dimension `n + 1`: the matrix for a set `T` sends every element of `T`
/// to the extra sink state `n` and fixes everything else; the sink keeps a
/// self-loop. The SIA-index of the encoded set equals the minimum cover
/// size.
pub fn encode_set_cover(inst: &SetCoverInstance) -> MatrixSet {
    let n = inst.universe_size();
    let mut patterns = Vec::with_capacity(inst.family().len());
    let mut labels = Vec::with_capacity(inst.family().len());
    for (si, set) in inst.family().iter().enumerate() {
        let mut image: Vec<usize> = (0..=n).collect();
        for &e in set {
            image[e] = n;
        }
        patterns.push(BooleanPattern::from_map(&image));
        labels.push(format!("T{}", si + 1));
    }
    MatrixSet::with_labels(patterns, labels).unwrap()
}
