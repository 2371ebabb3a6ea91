//! Shared helpers and independent oracles for the integration suites.
//!
//! Everything here recomputes results from definitions (naive triple-loop
//! products, cycle inspection without cutoffs, truth tables, exhaustive
//! covers) so the checks stay independent of the library's own fast paths.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sia_core::pattern::{BooleanPattern, MatrixSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Naive O(n^3) boolean multiply, straight from the definition.
pub fn naive_product(a: &BooleanPattern, b: &BooleanPattern) -> BooleanPattern {
    let n = a.n();
    BooleanPattern::from_fn(n, |i, j| (0..n).any(|k| a.bit(i, k) && b.bit(k, j)))
}

fn has_positive_column(p: &BooleanPattern) -> bool {
    let n = p.n();
    (0..n).any(|j| (0..n).all(|i| p.bit(i, j)))
}

/// SIA oracle: walk the power sequence with naive products until it repeats
/// and inspect the eventual cycle for a positive column. No cutoff.
pub fn sia_oracle(p: &BooleanPattern) -> bool {
    let mut seen: Vec<BooleanPattern> = Vec::new();
    let mut q = p.clone();
    loop {
        if let Some(start) = seen.iter().position(|s| *s == q) {
            return seen[start..].iter().any(has_positive_column);
        }
        seen.push(q.clone());
        q = naive_product(&q, p);
    }
}

/// Random pattern with at least one bit per row, at mixed densities.
pub fn random_row_allowable(rng: &mut ChaCha8Rng, n: usize) -> BooleanPattern {
    let density = [0.25, 0.4, 0.6][rng.gen_range(0..3)];
    let mut rows: Vec<Vec<u8>> = (0..n)
        .map(|_| (0..n).map(|_| u8::from(rng.gen_bool(density))).collect())
        .collect();
    for row in rows.iter_mut() {
        if row.iter().all(|&b| b == 0) {
            row[rng.gen_range(0..n)] = 1;
        }
    }
    BooleanPattern::from_rows(&rows)
}

pub fn automaton_from_code(n: usize, mut code: u64) -> BooleanPattern {
    let mut image = vec![0usize; n];
    for slot in image.iter_mut() {
        *slot = (code % n as u64) as usize;
        code /= n as u64;
    }
    BooleanPattern::from_map(&image)
}

/// Distinct automaton codes, sorted, as an unordered set sample.
pub fn random_automaton_set(rng: &mut ChaCha8Rng, n: usize, m: usize) -> MatrixSet {
    let total = (n as u64).pow(n as u32);
    let mut codes: Vec<u64> = Vec::with_capacity(m);
    while codes.len() < m {
        let c = rng.gen_range(0..total);
        if !codes.contains(&c) {
            codes.push(c);
        }
    }
    codes.sort_unstable();
    MatrixSet::new(codes.iter().map(|&c| automaton_from_code(n, c)).collect()).unwrap()
}

/// Truth-table satisfiability, independent of the formula type's own
/// evaluator.
pub fn sat_oracle(variable_count: usize, clauses: &[[i32; 3]]) -> bool {
    (0u64..1 << variable_count).any(|assignment| {
        clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize - 1;
                let value = assignment >> var & 1 == 1;
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    })
}

/// Exhaustive minimum cover size over all sub-families.
pub fn min_cover_oracle(universe_size: usize, family: &[Vec<usize>]) -> Option<u32> {
    let full = (1u64 << universe_size) - 1;
    let masks: Vec<u64> = family
        .iter()
        .map(|s| s.iter().fold(0u64, |acc, &e| acc | 1 << e))
        .collect();
    (0u64..1 << family.len())
        .filter(|pick| {
            masks
                .iter()
                .enumerate()
                .filter(|(i, _)| pick >> i & 1 == 1)
                .fold(0u64, |acc, (_, &m)| acc | m)
                == full
        })
        .map(|pick| pick.count_ones())
        .min()
}
