//! Existence tests for SIA products and shortest-product indices.
//!
//! The SIA-index is found by testing Lyndon words by increasing length:
//! every shortest SIA product is, up to a cyclic shift, the product of a
//! Lyndon word, and SIA-ness is invariant under cyclic shifts. The other
//! three indices come from a breadth-first search over the product pattern
//! semigroup.

use crate::classes::{check_sia, is_positive_column, is_sarymsakov, is_scrambling};
use crate::error::{Error, Result};
use crate::pattern::{BooleanPattern, MatrixSet};
use crate::word::{lyndon_words_of_length, Word};
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};

/// One of the four matrix classes an index can target.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MatrixClass {
    #[serde(rename = "pc")]
    PositiveColumn,
    #[serde(rename = "scr")]
    Scrambling,
    #[serde(rename = "sar")]
    Sarymsakov,
    #[serde(rename = "sia")]
    Sia,
}

impl std::fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self {
            MatrixClass::PositiveColumn => "pc",
            MatrixClass::Scrambling => "scr",
            MatrixClass::Sarymsakov => "sar",
            MatrixClass::Sia => "sia",
        };
        f.write_str(tag)
    }
}

/// Outcome of an index search.
///
/// `value` is the smallest product length in the class, together with a
/// shortest `witness` word (the lexicographically smallest one of that
/// length). An absent value either means the search stopped at
/// `explored_up_to`, or, when `no_product` is set, that no product of any
/// length belongs to the class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexResult {
    pub class: MatrixClass,
    pub value: Option<u64>,
    pub witness: Option<Word>,
    pub explored_up_to: u64,
    pub no_product: bool,
}

impl IndexResult {
    fn found(class: MatrixClass, value: u64, witness: Word) -> Self {
        IndexResult { class, value: Some(value), witness: Some(witness), explored_up_to: value, no_product: false }
    }

    fn exhausted(class: MatrixClass, explored_up_to: u64) -> Self {
        IndexResult { class, value: None, witness: None, explored_up_to, no_product: false }
    }

    fn nonexistent(class: MatrixClass) -> Self {
        IndexResult { class, value: None, witness: None, explored_up_to: 0, no_product: true }
    }

    /// Degenerate 1x1 case: the empty product is already in every class.
    fn trivial(class: MatrixClass) -> Self {
        IndexResult { class, value: Some(0), witness: Some(Word::empty()), explored_up_to: 0, no_product: false }
    }
}

fn require_row_allowable(s: &MatrixSet) -> Result<()> {
    match s.first_non_row_allowable() {
        Some(i) => {
            let row = s.pattern(i).first_zero_row().unwrap_or(0);
            Err(Error::NotRowAllowable { row })
        }
        None => Ok(()),
    }
}

/// Default SIA-index cutoff: the cubic reset-threshold bound (n^3 - n) / 6.
pub fn default_sia_cutoff(n: usize) -> u64 {
    ((n * n * n - n) / 6) as u64
}

/// Default layer budget for the BFS-based indices.
pub fn default_bfs_cutoff(n: usize) -> u64 {
    match 1u64.checked_shl(n as u32) {
        Some(base) => base.saturating_mul(n as u64),
        None => u64::MAX,
    }
}

/// Decides whether some finite product of the set is SIA (equivalently:
/// scrambling, Sarymsakov or positive-column).
///
/// Automaton sets use the polynomial pairwise-merge test; general sets fall
/// back to an exhaustive walk of the reachable product patterns, which is
/// correct but worst-case exponential.
pub fn exists_sia_product(s: &MatrixSet) -> Result<bool> {
    require_row_allowable(s)?;
    if s.is_automaton_set() {
        exists_sia_product_merge(s)
    } else {
        exists_sia_product_closure(s)
    }
}

/// Pairwise-merge existence test for automaton sets: a positive-column
/// product exists iff every pair of states is mapped to a single state by
/// some word. Errors on non-automaton input.
pub fn exists_sia_product_merge(s: &MatrixSet) -> Result<bool> {
    require_row_allowable(s)?;
    let mut maps = Vec::with_capacity(s.len());
    for (idx, p) in s.patterns().iter().enumerate() {
        match p.as_map() {
            Some(m) => maps.push(m),
            None => return Err(Error::NotAutomaton { index: idx }),
        }
    }
    let n = s.n();
    let mut merged = vec![true; n * n]; // diagonal starts merged
    for p in 0..n {
        for q in 0..n {
            if p != q {
                merged[p * n + q] = false;
            }
        }
    }
    loop {
        let mut changed = false;
        for p in 0..n {
            for q in p + 1..n {
                if merged[p * n + q] {
                    continue;
                }
                if maps.iter().any(|f| merged[f[p] * n + f[q]]) {
                    merged[p * n + q] = true;
                    merged[q * n + p] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(merged.iter().all(|&m| m))
}

/// Existence test by exhausting the reachable product patterns: true on the
/// first positive-column pattern, false when the closure is exhausted.
pub fn exists_sia_product_closure(s: &MatrixSet) -> Result<bool> {
    require_row_allowable(s)?;
    let mut seen: HashSet<BooleanPattern> = HashSet::new();
    let mut queue: VecDeque<BooleanPattern> = VecDeque::new();
    for p in s.patterns() {
        if seen.insert(p.clone()) {
            queue.push_back(p.clone());
        }
    }
    while let Some(p) = queue.pop_front() {
        if is_positive_column(&p) {
            return Ok(true);
        }
        for g in s.patterns() {
            let q = p.product(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    Ok(false)
}

fn class_member(p: &BooleanPattern, class: MatrixClass) -> Result<bool> {
    match class {
        MatrixClass::PositiveColumn => Ok(is_positive_column(p)),
        MatrixClass::Scrambling => Ok(is_scrambling(p)),
        MatrixClass::Sarymsakov => is_sarymsakov(p),
        MatrixClass::Sia => Ok(check_sia(p)?.is_some()),
    }
}

/// Breadth-first search over the product pattern semigroup for the smallest
/// product length in the given class.
///
/// Layers are explored by increasing length; identical patterns are
/// deduplicated, keeping the lexicographically smallest witness word. An
/// empty frontier certifies that no product of any length is in the class.
pub fn class_index_bfs(s: &MatrixSet, class: MatrixClass, cutoff: u64) -> Result<IndexResult> {
    assert!(cutoff >= 1, "cutoff must be at least 1");
    if s.n() == 1 {
        return Ok(IndexResult::trivial(class));
    }
    let mut seen: HashSet<BooleanPattern> = HashSet::new();
    let mut layer: Vec<(BooleanPattern, Word)> = Vec::new();
    for (idx, p) in s.patterns().iter().enumerate() {
        if seen.insert(p.clone()) {
            layer.push((p.clone(), Word::new(vec![idx as u16])));
        }
    }
    for len in 1..=cutoff {
        for (p, w) in &layer {
            if class_member(p, class)? {
                return Ok(IndexResult::found(class, len, w.clone()));
            }
        }
        if len == cutoff {
            break;
        }
        let mut next: Vec<(BooleanPattern, Word)> = Vec::new();
        for (p, w) in &layer {
            for (idx, g) in s.patterns().iter().enumerate() {
                let q = p.product(g);
                if seen.insert(q.clone()) {
                    let mut symbols = w.symbols().to_vec();
                    symbols.push(idx as u16);
                    next.push((q, Word::new(symbols)));
                }
            }
        }
        if next.is_empty() {
            // the whole product semigroup has been checked
            return Ok(IndexResult::nonexistent(class));
        }
        layer = next;
    }
    Ok(IndexResult::exhausted(class, cutoff))
}

/// SIA-index by Lyndon-word enumeration.
///
/// Tests the product of every Lyndon word of each length in lexicographic
/// order. The default cutoff is the cubic bound (n^3 - n) / 6; when no SIA
/// product exists at all the search is skipped and non-existence reported.
pub fn sia_index(s: &MatrixSet, cutoff: Option<u64>) -> Result<IndexResult> {
    require_row_allowable(s)?;
    if s.n() == 1 {
        return Ok(IndexResult::trivial(MatrixClass::Sia));
    }
    if !exists_sia_product(s)? {
        return Ok(IndexResult::nonexistent(MatrixClass::Sia));
    }
    let cutoff = cutoff.unwrap_or_else(|| default_sia_cutoff(s.n()).max(1));
    for len in 1..=cutoff {
        for word in lyndon_words_of_length(s.len(), len as usize) {
            let product = word.product(s);
            if check_sia(&product)?.is_some() {
                return Ok(IndexResult::found(MatrixClass::Sia, len, word));
            }
        }
    }
    Ok(IndexResult::exhausted(MatrixClass::Sia, cutoff))
}

/// Exhaustive SIA-index oracle: tests every word by increasing length, with
/// no Lyndon restriction. Unlike [`sia_index`] it never certifies
/// non-existence; an absent value always reports the cutoff reached.
pub fn naive_sia_index(s: &MatrixSet, cutoff: u64) -> Result<IndexResult> {
    require_row_allowable(s)?;
    if s.n() == 1 {
        return Ok(IndexResult::trivial(MatrixClass::Sia));
    }
    let k = s.len() as u64;
    for len in 1..=cutoff {
        let total = k.checked_pow(len as u32).expect("word count overflow");
        for code in 0..total {
            let mut symbols = vec![0u16; len as usize];
            let mut c = code;
            for slot in symbols.iter_mut().rev() {
                *slot = (c % k) as u16;
                c /= k;
            }
            let word = Word::new(symbols);
            if check_sia(&word.product(s))?.is_some() {
                return Ok(IndexResult::found(MatrixClass::Sia, len, word));
            }
        }
    }
    Ok(IndexResult::exhausted(MatrixClass::Sia, cutoff))
}

pub fn pc_index(s: &MatrixSet) -> Result<IndexResult> {
    class_index_bfs(s, MatrixClass::PositiveColumn, default_bfs_cutoff(s.n()))
}

pub fn scr_index(s: &MatrixSet) -> Result<IndexResult> {
    class_index_bfs(s, MatrixClass::Scrambling, default_bfs_cutoff(s.n()))
}

pub fn sar_index(s: &MatrixSet) -> Result<IndexResult> {
    class_index_bfs(s, MatrixClass::Sarymsakov, default_bfs_cutoff(s.n()))
}
