//! Membership predicates for the four matrix classes and the power bounds.
//!
//! The classes nest: positive-column patterns are scrambling, scrambling
//! patterns are Sarymsakov, Sarymsakov patterns are SIA. All predicates act
//! on zero patterns only; class membership of a stochastic matrix never
//! depends on the numeric values.

use crate::error::{Error, Result};
use crate::pattern::{BooleanPattern, StateSet};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Hard ceiling on the Sarymsakov brute-force dimension. The check
/// enumerates all 3^n disjoint subset pairs.
pub const DEFAULT_SARYMSAKOV_LIMIT: usize = 16;
const MAX_SARYMSAKOV_N: usize = 24;

/// Aggregate membership report for one pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub is_positive_column: bool,
    pub is_scrambling: bool,
    pub is_sarymsakov: bool,
    pub is_sia: bool,
    /// Smallest `p` such that the `p`-th boolean power has a positive
    /// column, when the pattern is SIA.
    pub sia_witness_power: Option<u64>,
}

/// Set of columns that are positive (nonzero in every row).
pub fn positive_columns(p: &BooleanPattern) -> StateSet {
    let n = p.n();
    let mut acc = p.row(0);
    for i in 1..n {
        let words: Vec<u64> = acc
            .words()
            .iter()
            .zip(p.row_words(i))
            .map(|(a, b)| a & b)
            .collect();
        acc = StateSet::from_words(n, words);
    }
    acc
}

pub fn is_positive_column(p: &BooleanPattern) -> bool {
    !positive_columns(p).is_empty()
}

/// Every pair of rows shares a column where both are nonzero.
pub fn is_scrambling(p: &BooleanPattern) -> bool {
    let n = p.n();
    for i in 0..n {
        for j in i + 1..n {
            let intersect = p
                .row_words(i)
                .iter()
                .zip(p.row_words(j))
                .any(|(a, b)| a & b != 0);
            if !intersect {
                return false;
            }
        }
    }
    true
}

/// Sarymsakov test with the default dimension limit.
pub fn is_sarymsakov(p: &BooleanPattern) -> Result<bool> {
    is_sarymsakov_with_limit(p, DEFAULT_SARYMSAKOV_LIMIT)
}

/// Brute-force Sarymsakov test: for every pair of disjoint nonempty subsets
/// `S`, `S'`, either the consequent sets intersect or their union is larger
/// than `S ∪ S'`. Enumerates all 3^n pairs with memoized consequents, so the
/// dimension is capped.
pub fn is_sarymsakov_with_limit(p: &BooleanPattern, limit: usize) -> Result<bool> {
    let n = p.n();
    let limit = limit.min(MAX_SARYMSAKOV_N);
    if n > limit {
        return Err(Error::SarymsakovLimit { n, limit });
    }
    // memoize F_P over all subsets; n <= 24 so one word suffices
    let rows: Vec<u64> = (0..n).map(|i| p.row_words(i)[0]).collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut consequents = vec![0u64; 1 << n];
    for s in 1..(1u64 << n) {
        let low = s & s.wrapping_neg();
        consequents[s as usize] =
            consequents[(s ^ low) as usize] | rows[low.trailing_zeros() as usize];
    }
    for s in 1..(1u64 << n) {
        let complement = full ^ s;
        let mut t = complement;
        while t != 0 {
            // each unordered pair once; the condition is symmetric
            if t < s {
                let fs = consequents[s as usize];
                let ft = consequents[t as usize];
                let intersecting = fs & ft != 0;
                let expanding = (fs | ft).count_ones() > (s | t).count_ones();
                if !intersecting && !expanding {
                    return Ok(false);
                }
            }
            t = (t - 1) & complement;
        }
    }
    Ok(true)
}

/// Iteration cap for SIA detection: the (n^2 - 3n + 3)rd power of an SIA
/// pattern is guaranteed to have a positive column. Clamped to 1 for the
/// degenerate n = 1, 2 cases.
pub fn sia_power_cap(n: usize) -> u64 {
    ((n * n + 3 - 3 * n) as u64).max(1)
}

/// SIA check with the smallest positive-column power as witness.
///
/// Iterates boolean powers up to [`sia_power_cap`], returning early on a
/// positive column or on a repeated pattern (the power sequence is
/// eventually periodic, so a repeat before a positive column certifies
/// non-membership). Requires a row-allowable pattern.
pub fn check_sia(p: &BooleanPattern) -> Result<Option<u64>> {
    if let Some(row) = (0..p.n()).find(|&i| p.row_words(i).iter().all(|&w| w == 0)) {
        return Err(Error::NotRowAllowable { row });
    }
    let cap = sia_power_cap(p.n());
    let mut seen: Vec<BooleanPattern> = Vec::new();
    let mut q = p.clone();
    for t in 1..=cap {
        if is_positive_column(&q) {
            return Ok(Some(t));
        }
        if seen.contains(&q) {
            return Ok(None);
        }
        seen.push(q.clone());
        q = q.product(p);
    }
    Ok(None)
}

pub fn is_sia(p: &BooleanPattern) -> Result<bool> {
    Ok(check_sia(p)?.is_some())
}

/// Smallest `t` with a positive column in the `t`-th power, found by pure
/// cycle detection on the power sequence (no fixed cutoff). Returns `None`
/// when the power cycle closes without a positive column.
pub fn smallest_positive_column_power(p: &BooleanPattern) -> Option<u64> {
    let mut seen: HashMap<BooleanPattern, u64> = HashMap::new();
    let mut q = p.clone();
    let mut t = 1u64;
    loop {
        if is_positive_column(&q) {
            return Some(t);
        }
        if seen.insert(q.clone(), t).is_some() {
            return None;
        }
        q = q.product(p);
        t += 1;
    }
}

/// Columns that are positive in all sufficiently large powers.
///
/// The positive-column set of the powers of a row-allowable pattern is
/// nondecreasing, so it is constant on the eventual cycle of the power
/// sequence; the fixed point is read off the first repeated pattern.
pub fn eventually_positive_columns(p: &BooleanPattern) -> Result<StateSet> {
    if let Some(row) = (0..p.n()).find(|&i| p.row_words(i).iter().all(|&w| w == 0)) {
        return Err(Error::NotRowAllowable { row });
    }
    let mut seen: HashMap<BooleanPattern, u64> = HashMap::new();
    let mut q = p.clone();
    let mut t = 1u64;
    loop {
        if seen.insert(q.clone(), t).is_some() {
            return Ok(positive_columns(&q));
        }
        q = q.product(p);
        t += 1;
    }
}

/// Classical primitivity cutoff: the exponent of a primitive pattern is at
/// most (n-1)^2 + 1.
pub fn primitivity_cap(n: usize) -> u64 {
    ((n - 1) * (n - 1) + 1) as u64
}

fn full_row_count(p: &BooleanPattern) -> usize {
    let n = p.n();
    let full = BooleanPattern::ones(n);
    (0..n)
        .filter(|&i| p.row_words(i) == full.row_words(0))
        .count()
}

/// The k-th local exponent: smallest power with at least `k` all-positive
/// rows. `None` when the pattern is not primitive (no power is all-ones
/// within the classical (n-1)^2 + 1 bound).
pub fn local_exponent(p: &BooleanPattern, k: usize) -> Option<u64> {
    let n = p.n();
    assert!(k >= 1 && k <= n, "k must lie in 1..=n");
    let cap = primitivity_cap(n);
    let ones = BooleanPattern::ones(n);
    let mut q = p.clone();
    let mut first_hit = None;
    for t in 1..=cap {
        if first_hit.is_none() && full_row_count(&q) >= k {
            first_hit = Some(t);
        }
        if q == ones {
            return first_hit;
        }
        q = q.product(p);
    }
    None
}

/// Evaluates all four predicates on a row-allowable pattern.
pub fn classify(p: &BooleanPattern) -> Result<ClassReport> {
    let sia_witness_power = check_sia(p)?;
    Ok(ClassReport {
        is_positive_column: is_positive_column(p),
        is_scrambling: is_scrambling(p),
        is_sarymsakov: is_sarymsakov(p)?,
        is_sia: sia_witness_power.is_some(),
        sia_witness_power,
    })
}

impl ClassReport {
    /// The nesting of the four classes, as implications.
    pub fn inclusion_chain_holds(&self) -> bool {
        (!self.is_positive_column || self.is_scrambling)
            && (!self.is_scrambling || self.is_sarymsakov)
            && (!self.is_sarymsakov || self.is_sia)
    }
}
