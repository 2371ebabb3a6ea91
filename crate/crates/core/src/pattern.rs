//! Boolean zero-pattern arithmetic.
//!
//! A [`BooleanPattern`] records which entries of a nonnegative matrix are
//! nonzero, one bitset per row. Products, consequent sets and the structural
//! predicates here are the primitives every class test and index search is
//! built from. Patterns are immutable values: operations return fresh
//! patterns and everything is safe to share across threads.

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn words_per_row(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// Mask selecting the valid bits of the last word of a width-`n` row.
fn tail_mask(n: usize) -> u64 {
    let rem = n % WORD_BITS;
    if rem == 0 {
        u64::MAX
    } else {
        (1u64 << rem) - 1
    }
}

/// A subset of the state space `{0, .., n-1}`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StateSet {
    n: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet { n, words: vec![0; words_per_row(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; words_per_row(n)];
        if let Some(last) = words.last_mut() {
            *last = tail_mask(n);
        }
        StateSet { n, words }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut s = Self::empty(n);
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n, "state {i} out of range for n = {}", self.n);
        self.words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        assert_eq!(self.n, other.n, "state set dimensions differ");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        StateSet { n: self.n, words }
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        assert_eq!(self.n, other.n, "state set dimensions differ");
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Iterate over the member states in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + bit)
                }
            })
        })
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_per_row(n));
        StateSet { n, words }
    }
}

/// The zero/nonzero pattern of an `n x n` nonnegative matrix.
///
/// Bit `j` of row `i` is set iff entry `(i, j)` is nonzero. Rows are packed
/// into `u64` words; dimensions up to 64 use one word per row and larger
/// dimensions fall back to multiple words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanPattern {
    n: usize,
    bits: Vec<u64>,
}

impl BooleanPattern {
    /// All-zero pattern. Not row-allowable; mostly a building block.
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        BooleanPattern { n, bits: vec![0; n * words_per_row(n)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut p = Self::zeros(n);
        for i in 0..n {
            p.set(i, i);
        }
        p
    }

    pub fn ones(n: usize) -> Self {
        let wpr = words_per_row(n);
        let mut bits = vec![u64::MAX; n * wpr];
        let mask = tail_mask(n);
        for row in 0..n {
            bits[row * wpr + wpr - 1] = mask;
        }
        BooleanPattern { n, bits }
    }

    /// Build a pattern from a predicate on entries.
    pub fn from_fn(n: usize, mut nonzero: impl FnMut(usize, usize) -> bool) -> Self {
        let mut p = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if nonzero(i, j) {
                    p.set(i, j);
                }
            }
        }
        p
    }

    /// Build from explicit 0/1 rows.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must be square");
        Self::from_fn(n, |i, j| rows[i][j] != 0)
    }

    /// Automaton pattern of the map `i -> image[i]` (exactly one 1 per row).
    pub fn from_map(image: &[usize]) -> Self {
        let n = image.len();
        let mut p = Self::zeros(n);
        for (i, &j) in image.iter().enumerate() {
            p.set(i, j);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn set(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "entry ({i}, {j}) out of range");
        let wpr = words_per_row(self.n);
        self.bits[i * wpr + j / WORD_BITS] |= 1u64 << (j % WORD_BITS);
    }

    pub fn bit(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n && j < self.n, "entry ({i}, {j}) out of range");
        let wpr = words_per_row(self.n);
        self.bits[i * wpr + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    /// The words backing row `i`.
    pub fn row_words(&self, i: usize) -> &[u64] {
        let wpr = words_per_row(self.n);
        &self.bits[i * wpr..(i + 1) * wpr]
    }

    /// Row `i` as a state set (the supports of the row).
    pub fn row(&self, i: usize) -> StateSet {
        StateSet::from_words(self.n, self.row_words(i).to_vec())
    }

    /// True iff every row has at least one nonzero entry.
    pub fn is_row_allowable(&self) -> bool {
        (0..self.n).all(|i| self.row_words(i).iter().any(|&w| w != 0))
    }

    /// Index of the first all-zero row, if any.
    pub(crate) fn first_zero_row(&self) -> Option<usize> {
        (0..self.n).find(|&i| self.row_words(i).iter().all(|&w| w == 0))
    }

    /// True iff every row has exactly one nonzero entry.
    pub fn is_automaton(&self) -> bool {
        (0..self.n).all(|i| {
            self.row_words(i)
                .iter()
                .map(|w| w.count_ones() as usize)
                .sum::<usize>()
                == 1
        })
    }

    /// For an automaton pattern, the map `i -> f(i)`.
    pub fn as_map(&self) -> Option<Vec<usize>> {
        let mut image = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let row = self.row(i);
            let mut it = row.iter();
            let j = it.next()?;
            if it.next().is_some() {
                return None;
            }
            image.push(j);
        }
        Some(image)
    }

    /// Boolean matrix product: bit `(i, j)` of the result is set iff there is
    /// `k` with `self(i, k)` and `other(k, j)`.
    pub fn product(&self, other: &BooleanPattern) -> BooleanPattern {
        assert_eq!(self.n, other.n, "pattern dimensions differ");
        let n = self.n;
        let wpr = words_per_row(n);
        let mut bits = vec![0u64; n * wpr];
        for i in 0..n {
            let out = i * wpr;
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let k = wi * WORD_BITS + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let src = k * wpr;
                    for t in 0..wpr {
                        bits[out + t] |= other.bits[src + t];
                    }
                }
            }
        }
        BooleanPattern { n: self.n, bits }
    }

    /// Boolean power; `pow(0)` is the identity pattern.
    pub fn pow(&self, t: u64) -> BooleanPattern {
        let mut acc = BooleanPattern::identity(self.n);
        for _ in 0..t {
            acc = acc.product(self);
        }
        acc
    }

    /// Consequent set: the union of the rows indexed by `s`
    /// (the out-neighborhood of `s` in the associated digraph).
    pub fn consequent(&self, s: &StateSet) -> StateSet {
        assert_eq!(self.n, s.n(), "pattern and state set dimensions differ");
        let wpr = words_per_row(self.n);
        let mut words = vec![0u64; wpr];
        for i in s.iter() {
            for (t, &w) in self.row_words(i).iter().enumerate() {
                words[t] |= w;
            }
        }
        StateSet::from_words(self.n, words)
    }

    /// Bitwise OR with another pattern (edge union of the digraphs).
    pub fn union(&self, other: &BooleanPattern) -> BooleanPattern {
        assert_eq!(self.n, other.n, "pattern dimensions differ");
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a | b)
            .collect();
        BooleanPattern { n: self.n, bits }
    }
}

impl std::fmt::Debug for BooleanPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BooleanPattern({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}", u8::from(self.bit(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Dense nonnegative matrix with unit row sums.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    n: usize,
    entries: Vec<f64>,
}

/// Row sums must match 1 within this tolerance.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

impl StochasticMatrix {
    /// Validates nonnegativity and unit row sums (tolerance `1e-9`).
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        assert!(n >= 1, "dimension must be at least 1");
        assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
        for (idx, &v) in entries.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::NegativeEntry { row: idx / n, col: idx % n, value: v });
            }
        }
        for i in 0..n {
            let sum: f64 = entries[i * n..(i + 1) * n].iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::NotStochastic { row: i, sum, tolerance: ROW_SUM_TOLERANCE });
            }
        }
        Ok(StochasticMatrix { n, entries })
    }

    /// Numeric representative of a pattern: each row's mass is split
    /// uniformly over its support.
    pub fn uniform_from_pattern(p: &BooleanPattern) -> Result<Self> {
        let n = p.n();
        if let Some(row) = p.first_zero_row() {
            return Err(Error::NotRowAllowable { row });
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            let support: Vec<usize> = p.row(i).iter().collect();
            let mass = 1.0 / support.len() as f64;
            for j in support {
                entries[i * n + j] = mass;
            }
        }
        Ok(StochasticMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Zero pattern of the matrix: bit `(i, j)` set iff the entry exceeds
    /// `zero_tolerance`. Rejects rows whose support vanishes under the
    /// tolerance.
    pub fn pattern(&self, zero_tolerance: f64) -> Result<BooleanPattern> {
        assert!(zero_tolerance >= 0.0, "zero tolerance must be nonnegative");
        let p = BooleanPattern::from_fn(self.n, |i, j| self.get(i, j) > zero_tolerance);
        if let Some(row) = p.first_zero_row() {
            return Err(Error::ZeroRow { row, tolerance: zero_tolerance });
        }
        Ok(p)
    }
}

/// Ordered finite collection of same-dimension patterns with symbol labels.
///
/// The list position fixes the symbol order used by words and the
/// lexicographic order of index searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSet {
    n: usize,
    patterns: Vec<BooleanPattern>,
    labels: Vec<String>,
}

/// Spreadsheet-style label for position `i`: A, B, .., Z, AA, AB, ..
pub fn default_label(i: usize) -> String {
    let mut i = i + 1;
    let mut out = Vec::new();
    while i > 0 {
        i -= 1;
        out.push(b'A' + (i % 26) as u8);
        i /= 26;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

impl MatrixSet {
    /// Builds a set with default labels `A, B, ..`.
    pub fn new(patterns: Vec<BooleanPattern>) -> Result<Self> {
        let labels = (0..patterns.len()).map(default_label).collect();
        Self::with_labels(patterns, labels)
    }

    pub fn with_labels(patterns: Vec<BooleanPattern>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = patterns.first() else {
            return Err(Error::EmptySet);
        };
        let n = first.n();
        for p in &patterns {
            if p.n() != n {
                return Err(Error::MixedDimensions { a: n, b: p.n() });
            }
        }
        if labels.len() != patterns.len() {
            return Err(Error::LabelCountMismatch { patterns: patterns.len(), labels: labels.len() });
        }
        Ok(MatrixSet { n, patterns, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sets
    }

    pub fn pattern(&self, i: usize) -> &BooleanPattern {
        &self.patterns[i]
    }

    pub fn patterns(&self) -> &[BooleanPattern] {
        &self.patterns
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// True iff every member is an automaton pattern.
    pub fn is_automaton_set(&self) -> bool {
        self.patterns.iter().all(BooleanPattern::is_automaton)
    }

    /// Index of the first non-row-allowable member, if any.
    pub fn first_non_row_allowable(&self) -> Option<usize> {
        self.patterns.iter().position(|p| !p.is_row_allowable())
    }

    /// Bitwise OR of all members.
    pub fn union_pattern(&self) -> BooleanPattern {
        let mut acc = self.patterns[0].clone();
        for p in &self.patterns[1..] {
            acc = acc.union(p);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Naive O(n^3) boolean multiply used as the oracle for the bitset path.
    fn naive_product(a: &BooleanPattern, b: &BooleanPattern) -> BooleanPattern {
        let n = a.n();
        BooleanPattern::from_fn(n, |i, j| (0..n).any(|k| a.bit(i, k) && b.bit(k, j)))
    }

    fn random_pattern(rng: &mut ChaCha8Rng, n: usize) -> BooleanPattern {
        BooleanPattern::from_fn(n, |_, _| rng.gen_bool(0.4))
    }

    pub(crate) fn cerny_b4() -> BooleanPattern {
        BooleanPattern::from_rows(&[
            vec![0, 1, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
    }

    #[test]
    fn pattern_of_identity() {
        let m = StochasticMatrix::new(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(m.pattern(0.0).unwrap(), BooleanPattern::identity(2));
    }

    #[test]
    fn pattern_of_uniform_is_all_ones() {
        let m = StochasticMatrix::new(4, vec![0.25; 16]).unwrap();
        assert_eq!(m.pattern(0.0).unwrap(), BooleanPattern::ones(4));
    }

    #[test]
    fn pattern_of_cerny_merge_matrix() {
        let mut entries = vec![0.0; 16];
        for (i, j) in [(0, 1), (1, 1), (2, 2), (3, 3)] {
            entries[i * 4 + j] = 1.0;
        }
        let m = StochasticMatrix::new(4, entries).unwrap();
        assert_eq!(m.pattern(0.0).unwrap(), cerny_b4());
    }

    #[test]
    fn pattern_of_applies_tolerance() {
        let m = StochasticMatrix::new(2, vec![0.999999999, 1e-9, 0.5, 0.5]).unwrap();
        let p = m.pattern(1e-6).unwrap();
        assert!(p.bit(0, 0) && !p.bit(0, 1));
        // tolerance that wipes out a whole row is rejected
        assert!(matches!(m.pattern(1.0), Err(Error::ZeroRow { row: 0, .. })));
    }

    #[test]
    fn stochastic_validation() {
        assert!(matches!(
            StochasticMatrix::new(2, vec![0.5, 0.4, 0.5, 0.5]),
            Err(Error::NotStochastic { row: 0, .. })
        ));
        assert!(matches!(
            StochasticMatrix::new(2, vec![1.5, -0.5, 0.5, 0.5]),
            Err(Error::NegativeEntry { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn product_identity_is_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=6 {
            let id = BooleanPattern::identity(n);
            for _ in 0..20 {
                let p = random_pattern(&mut rng, n);
                assert_eq!(id.product(&p), p);
                assert_eq!(p.product(&id), p);
            }
        }
    }

    #[test]
    fn product_of_cerny_pair_matches_naive_oracle() {
        let a = BooleanPattern::from_map(&[1, 2, 3, 0]);
        let b = cerny_b4();
        let ab = a.product(&b);
        assert_eq!(ab, naive_product(&a, &b));
        assert_eq!(ab, BooleanPattern::from_map(&[1, 2, 3, 1]));
    }

    #[test]
    fn product_all_ones_absorbs() {
        let ones = BooleanPattern::ones(3);
        assert_eq!(ones.product(&ones), ones);
    }

    #[test]
    fn product_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=6 {
            for _ in 0..50 {
                let a = random_pattern(&mut rng, n);
                let b = random_pattern(&mut rng, n);
                let c = random_pattern(&mut rng, n);
                assert_eq!(a.product(&b).product(&c), a.product(&b.product(&c)));
            }
        }
    }

    #[test]
    fn product_agrees_with_naive_oracle_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=12);
            let a = random_pattern(&mut rng, n);
            let b = random_pattern(&mut rng, n);
            assert_eq!(a.product(&b), naive_product(&a, &b));
        }
    }

    #[test]
    fn product_dimension_mismatch_panics() {
        let a = BooleanPattern::identity(2);
        let b = BooleanPattern::identity(3);
        assert!(std::panic::catch_unwind(|| a.product(&b)).is_err());
    }

    #[test]
    fn consequent_of_empty_is_empty() {
        let p = BooleanPattern::ones(4);
        assert!(p.consequent(&StateSet::empty(4)).is_empty());
    }

    #[test]
    fn consequent_of_identity_is_identity() {
        let p = BooleanPattern::identity(5);
        let s = StateSet::from_indices(5, &[0, 2, 4]);
        assert_eq!(p.consequent(&s), s);
    }

    #[test]
    fn consequent_of_cerny_merge_rows() {
        // rows 0 and 1 of the n = 4 merge matrix both map to state 1
        let b = cerny_b4();
        let s = StateSet::from_indices(4, &[0, 1]);
        assert_eq!(b.consequent(&s), StateSet::from_indices(4, &[1]));
    }

    #[test]
    fn consequent_distributes_over_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let p = random_pattern(&mut rng, n);
            let s = StateSet::from_indices(
                n,
                &(0..n).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>(),
            );
            let t = StateSet::from_indices(
                n,
                &(0..n).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>(),
            );
            assert_eq!(
                p.consequent(&s.union(&t)),
                p.consequent(&s).union(&p.consequent(&t))
            );
        }
    }

    #[test]
    fn consequent_of_row_allowable_is_nonempty() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let p = BooleanPattern::from_fn(n, |i, j| rng.gen_bool(0.3) || j == i);
            assert!(p.is_row_allowable());
            let s = StateSet::from_indices(n, &[rng.gen_range(0..n)]);
            assert!(!p.consequent(&s).is_empty());
        }
    }

    #[test]
    fn automaton_and_row_allowable_predicates() {
        assert!(BooleanPattern::identity(3).is_automaton());
        assert!(!BooleanPattern::ones(3).is_automaton());
        assert!(BooleanPattern::from_map(&[1, 2, 3, 0]).is_automaton());
        assert!(cerny_b4().is_automaton());

        assert!(BooleanPattern::identity(3).is_row_allowable());
        let with_zero_row = BooleanPattern::from_rows(&[vec![1, 0], vec![0, 0]]);
        assert!(!with_zero_row.is_row_allowable());
        // chain with a self-loop at state 0 and a zero diagonal at the end
        let prop3 = BooleanPattern::from_rows(&[
            vec![1, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
        ]);
        assert!(prop3.is_row_allowable());
    }

    #[test]
    fn multiword_rows_behave_like_small_ones() {
        // n = 70 exercises the two-words-per-row path
        let n = 70;
        let p = BooleanPattern::from_fn(n, |i, j| j == (i + 1) % n);
        let q = p.pow(n as u64);
        assert_eq!(q, BooleanPattern::identity(n));
        assert!(p.bit(n - 1, 0) && !p.bit(n - 1, 1));
        let full = BooleanPattern::ones(n);
        assert_eq!(full.product(&full), full);
        assert_eq!(full.row(0).len(), n);
    }

    #[test]
    fn uniform_from_pattern_is_stochastic() {
        let p = BooleanPattern::from_rows(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]);
        let m = StochasticMatrix::uniform_from_pattern(&p).unwrap();
        assert_eq!(m.get(0, 0), 0.5);
        assert_eq!(m.get(2, 0), 1.0 / 3.0);
        assert_eq!(m.pattern(0.0).unwrap(), p);
    }

    #[test]
    fn matrix_set_validation() {
        assert!(matches!(MatrixSet::new(vec![]), Err(Error::EmptySet)));
        let err = MatrixSet::new(vec![BooleanPattern::identity(2), BooleanPattern::identity(3)]);
        assert!(matches!(err, Err(Error::MixedDimensions { a: 2, b: 3 })));
        let set = MatrixSet::new(vec![BooleanPattern::identity(2); 3]).unwrap();
        assert_eq!(set.labels(), &["A", "B", "C"]);
    }

    #[test]
    fn default_labels_roll_over() {
        assert_eq!(default_label(0), "A");
        assert_eq!(default_label(25), "Z");
        assert_eq!(default_label(26), "AA");
        assert_eq!(default_label(27), "AB");
    }
}
