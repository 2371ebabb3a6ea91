//! Words over a matrix-set alphabet and Lyndon word generation.

use crate::pattern::{BooleanPattern, MatrixSet};
use serde::{Deserialize, Serialize};

/// A finite sequence of symbols, each an index into a [`MatrixSet`].
///
/// Comparison is lexicographic with the set's label order, and a proper
/// prefix is smaller than its extensions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    symbols: Vec<u16>,
}

impl Word {
    pub fn new(symbols: Vec<u16>) -> Self {
        Word { symbols }
    }

    /// The length-0 word (its product is the identity pattern).
    pub fn empty() -> Self {
        Word { symbols: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    /// The cyclic shift moving the first `k` symbols to the back.
    pub fn cyclic_shift(&self, k: usize) -> Word {
        let k = k % self.symbols.len().max(1);
        let mut symbols = self.symbols[k..].to_vec();
        symbols.extend_from_slice(&self.symbols[..k]);
        Word { symbols }
    }

    /// Product of the set members named by the word, taken left to right.
    /// The empty word yields the identity pattern.
    pub fn product(&self, set: &MatrixSet) -> BooleanPattern {
        let mut acc = BooleanPattern::identity(set.n());
        for &s in &self.symbols {
            acc = acc.product(set.pattern(s as usize));
        }
        acc
    }

    /// Human-readable rendering using the set's labels. Multi-character
    /// labels are joined with dots to keep the word unambiguous.
    pub fn render(&self, labels: &[String]) -> String {
        if self.symbols.is_empty() {
            return "(empty)".to_string();
        }
        let sep = if labels.iter().all(|l| l.chars().count() == 1) { "" } else { "." };
        self.symbols
            .iter()
            .map(|&s| labels[s as usize].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// Iterator over the Lyndon words of length at most `max_len` over a
/// `k`-symbol alphabet, emitted in lexicographic order (Duval's successor
/// rule).
pub struct LyndonWords {
    k: u16,
    max_len: usize,
    buf: Vec<u16>,
    started: bool,
}

/// A word is Lyndon when it is strictly smaller than all of its nontrivial
/// cyclic shifts.
pub fn lyndon_words(alphabet_size: usize, max_len: usize) -> LyndonWords {
    assert!(alphabet_size >= 1, "alphabet must have at least one symbol");
    assert!(alphabet_size <= u16::MAX as usize + 1, "alphabet too large");
    assert!(max_len >= 1, "max_len must be at least 1");
    LyndonWords { k: alphabet_size as u16, max_len, buf: Vec::new(), started: false }
}

impl Iterator for LyndonWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if !self.started {
            self.started = true;
            self.buf.push(0);
            return Some(Word::new(self.buf.clone()));
        }
        let len = self.buf.len();
        for i in len..self.max_len {
            let repeat = self.buf[i % len];
            self.buf.push(repeat);
        }
        while self.buf.last() == Some(&(self.k - 1)) {
            self.buf.pop();
        }
        let last = self.buf.last_mut()?;
        *last += 1;
        Some(Word::new(self.buf.clone()))
    }
}

/// The Lyndon words of exactly the given length, in lexicographic order.
pub fn lyndon_words_of_length(alphabet_size: usize, len: usize) -> Vec<Word> {
    lyndon_words(alphabet_size, len)
        .filter(|w| w.len() == len)
        .collect()
}
