//! Generators for the named automaton families and initial connectivity.

use crate::pattern::{BooleanPattern, MatrixSet, StateSet};

/// The Černý pair on `n` states: `A` is the full cycle `i -> i+1 (mod n)`,
/// `B` merges state 0 into state 1 and fixes every other state.
pub fn cerny_set(n: usize) -> MatrixSet {
    assert!(n >= 2, "Černý set needs n >= 2");
    let a = BooleanPattern::from_fn(n, |i, j| j == (i + 1) % n);
    let b = BooleanPattern::from_fn(n, |i, j| if i == 0 { j == 1 } else { j == i });
    MatrixSet::new(vec![a, b]).unwrap()
}

/// The Wielandt pair on `n` states: both members shift `i -> i+1` for
/// `i < n-1`; `A` sends the last state to state 1, `B` sends it to state 0.
pub fn wielandt_set(n: usize) -> MatrixSet {
    assert!(n >= 3, "Wielandt set needs n >= 3");
    let a = BooleanPattern::from_fn(n, |i, j| if i < n - 1 { j == i + 1 } else { j == 1 });
    let b = BooleanPattern::from_fn(n, |i, j| if i < n - 1 { j == i + 1 } else { j == 0 });
    MatrixSet::new(vec![a, b]).unwrap()
}

/// The chain automaton with a self-loop at state 0 and `i -> i-1` for
/// `i >= 1`. Its smallest positive-column power is exactly `n - 1`.
pub fn line_automaton(n: usize) -> BooleanPattern {
    assert!(n >= 2, "line automaton needs n >= 2");
    BooleanPattern::from_fn(n, |i, j| if i == 0 { j == 0 } else { j == i - 1 })
}

/// True iff some node of the union digraph reaches every node.
pub fn is_initially_connected(s: &MatrixSet) -> bool {
    let union = s.union_pattern();
    let n = s.n();
    (0..n).any(|q| reachable_from(&union, q).len() == n)
}

fn reachable_from(p: &BooleanPattern, start: usize) -> StateSet {
    let n = p.n();
    let mut reach = StateSet::from_indices(n, &[start]);
    loop {
        let next = reach.union(&p.consequent(&reach));
        if next == reach {
            return reach;
        }
        reach = next;
    }
}
