//! Exhaustive search over sets of automaton matrices for the maximum
//! SIA-index per dimension.
//!
//! Automaton patterns on `n` states are in bijection with the maps
//! `{0,..,n-1} -> {0,..,n-1}`, encoded as base-`n` integers. The engine
//! walks all unordered `m`-subsets of those codes, decides SIA-set
//! membership by the pairwise-merge test, and computes the SIA-index over
//! compact function tables. Work is split into chunks by the smallest code
//! of a set; chunk results are merged in code order, so the summary is
//! identical for every worker count.

use crate::error::{Error, Result};
use crate::indices::default_sia_cutoff;
use crate::io::MatrixSetDoc;
use crate::pattern::{BooleanPattern, MatrixSet};
use crate::word::{lyndon_words_of_length, Word};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

// n^n must stay within u64, and nothing near the top is enumerable anyway
const MAX_SEARCH_N: usize = 12;
const MAX_SEARCH_M: usize = 8;
/// Node relabeling is canonicalized by minimizing over all n! permutations;
/// past this dimension the search falls back to full enumeration.
const MAX_CANONICAL_N: usize = 7;

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;
pub const DEFAULT_MAX_EXAMPLES: usize = 3;

/// Configuration of one exhaustive run.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub n: usize,
    pub set_size: usize,
    pub ic_only: bool,
    pub canonical: bool,
    pub cutoff: Option<u64>,
    pub workers: usize,
    pub budget: u64,
    pub max_examples: usize,
}

impl SearchOptions {
    pub fn new(n: usize, set_size: usize) -> Self {
        SearchOptions {
            n,
            set_size,
            ic_only: false,
            canonical: false,
            cutoff: None,
            workers: 1,
            budget: DEFAULT_SEARCH_BUDGET,
            max_examples: DEFAULT_MAX_EXAMPLES,
        }
    }
}

/// One maximizing set, rendered as a matrix-set document plus a shortest
/// SIA witness word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalExample {
    pub set: MatrixSetDoc,
    pub witness: String,
    pub witness_symbols: Vec<u16>,
}

/// Result of one exhaustive run. Everything except `wall_time_ms` is a
/// deterministic function of the options.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub n: usize,
    pub set_size: usize,
    pub ic_only: bool,
    pub canonical: bool,
    pub cutoff: u64,
    pub max_index: u64,
    pub extremal_count: u64,
    pub enumerated: u64,
    pub wall_time_ms: u64,
    pub extremal_examples: Vec<ExtremalExample>,
}

impl SearchSummary {
    /// CSV header matching [`SearchSummary::csv_row`].
    pub fn csv_header() -> &'static str {
        "n,set_size,ic_only,max_index,extremal_count,enumerated,wall_time_ms"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.set_size,
            self.ic_only,
            self.max_index,
            self.extremal_count,
            self.enumerated,
            self.wall_time_ms
        )
    }

    /// Copy with the timing field cleared, for comparing runs.
    pub fn with_wall_time_zeroed(&self) -> SearchSummary {
        let mut s = self.clone();
        s.wall_time_ms = 0;
        s
    }
}

/// CSV table `(n, max_index, 2n)` for the growth plot of the per-dimension
/// maxima against the conjectured linear bound.
pub fn emit_growth_curve(summaries: &[SearchSummary]) -> String {
    let mut out = String::from("n,max_index,2n\n");
    for s in summaries {
        out.push_str(&format!("{},{},{}\n", s.n, s.max_index, 2 * s.n));
    }
    out
}

// --- function-table engine ---------------------------------------------

type Table = [u8; MAX_SEARCH_N];

fn decode_table(mut code: u64, n: usize) -> Table {
    let mut t = [0u8; MAX_SEARCH_N];
    for slot in t.iter_mut().take(n) {
        *slot = (code % n as u64) as u8;
        code /= n as u64;
    }
    t
}

fn encode_table(t: &Table, n: usize) -> u64 {
    let mut code = 0u64;
    for i in (0..n).rev() {
        code = code * n as u64 + t[i] as u64;
    }
    code
}

/// `a` then `b`, matching the matrix product `A * B`.
fn compose(a: &Table, b: &Table, n: usize) -> Table {
    let mut t = [0u8; MAX_SEARCH_N];
    for i in 0..n {
        t[i] = b[a[i] as usize];
    }
    t
}

/// An automaton pattern is SIA iff its (n-1)st power is a constant map.
fn table_is_sia(f: &Table, n: usize) -> bool {
    let mut g = *f;
    for _ in 1..n.saturating_sub(1) {
        g = compose(&g, f, n);
    }
    g[..n].iter().all(|&x| x == g[0])
}

/// Pairwise-merge test: true iff every state pair is mapped to one state by
/// some word.
fn tables_have_sia_product(tables: &[Table], n: usize) -> bool {
    let mut merged = [[false; MAX_SEARCH_N]; MAX_SEARCH_N];
    for (p, row) in merged.iter_mut().enumerate().take(n) {
        row[p] = true;
    }
    loop {
        let mut changed = false;
        for p in 0..n {
            for q in p + 1..n {
                if merged[p][q] {
                    continue;
                }
                if tables
                    .iter()
                    .any(|f| merged[f[p] as usize][f[q] as usize] || merged[f[q] as usize][f[p] as usize])
                {
                    merged[p][q] = true;
                    merged[q][p] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).all(|p| (p + 1..n).all(|q| merged[p][q]))
}

fn table_image_mask(f: &Table, n: usize) -> u32 {
    let mut image = 0u32;
    for &x in f.iter().take(n) {
        image |= 1 << x;
    }
    image
}

/// Adjacency rows packed one byte per node; only valid for n <= 8.
fn table_adjacency_packed(f: &Table, n: usize) -> u64 {
    let mut adj = 0u64;
    for (i, &x) in f.iter().enumerate().take(n) {
        adj |= (1u64 << x) << (8 * i);
    }
    adj
}

/// Initial connectivity of the union digraph of the tables.
fn tables_initially_connected(tables: &[Table], n: usize) -> bool {
    let mut incoming = 0u32;
    for f in tables {
        incoming |= table_image_mask(f, n);
    }
    if n <= 8 {
        let mut adj = 0u64;
        for f in tables {
            adj |= table_adjacency_packed(f, n);
        }
        return initially_connected_packed(adj, incoming, n);
    }
    let mut adj = [0u32; MAX_SEARCH_N];
    for f in tables {
        for (i, slot) in adj.iter_mut().enumerate().take(n) {
            *slot |= 1 << f[i];
        }
    }
    let full: u32 = (1u32 << n) - 1;
    connected_from_sources(incoming, full, |seed| closure(&adj, seed), n)
}

/// `adj` holds the union digraph one byte per row, `incoming` the union of
/// all image masks.
fn initially_connected_packed(adj: u64, incoming: u32, n: usize) -> bool {
    let full: u32 = (1u32 << n) - 1;
    connected_from_sources(incoming, full, |seed| closure_packed(adj, seed), n)
}

/// Shared source-scan: a node without incoming edges heads its own source
/// component, so two of them rule initial connectivity out and a single one
/// is the only possible root. When every node has an incoming edge, the
/// last node to start a fresh closure lies in a source component, and the
/// graph is initially connected iff that closure covers everything.
fn connected_from_sources(
    incoming: u32,
    full: u32,
    mut closure_of: impl FnMut(u32) -> u32,
    n: usize,
) -> bool {
    let orphans = full & !incoming;
    if orphans.count_ones() > 1 {
        return false;
    }
    if orphans != 0 {
        return closure_of(orphans) == full;
    }
    let mut visited = 0u32;
    let mut last_closure = 0u32;
    for q in 0..n {
        if visited >> q & 1 == 1 {
            continue;
        }
        let reach = closure_of(1u32 << q);
        if reach == full {
            return true;
        }
        visited |= reach;
        last_closure = reach;
    }
    last_closure == full
}

fn closure(adj: &[u32; MAX_SEARCH_N], seed: u32) -> u32 {
    let mut reach = seed;
    let mut frontier = seed;
    while frontier != 0 {
        let mut added = 0u32;
        let mut bits = frontier;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            added |= adj[i];
        }
        frontier = added & !reach;
        reach |= added;
    }
    reach
}

fn closure_packed(adj: u64, seed: u32) -> u32 {
    let mut reach = seed;
    let mut frontier = seed;
    while frontier != 0 {
        let mut added = 0u32;
        let mut bits = frontier;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            added |= (adj >> (8 * i)) as u32 & 0xFF;
        }
        frontier = added & !reach;
        reach |= added;
    }
    reach
}

/// Per-worker cache of Lyndon words, bucketed by exact length.
struct LyndonCache {
    alphabet: usize,
    by_len: Vec<Vec<Vec<u8>>>,
}

impl LyndonCache {
    fn new(alphabet: usize) -> Self {
        LyndonCache { alphabet, by_len: vec![Vec::new()] }
    }

    fn ensure(&mut self, len: usize) {
        while self.by_len.len() <= len {
            let l = self.by_len.len();
            let words = lyndon_words_of_length(self.alphabet, l)
                .into_iter()
                .map(|w| w.symbols().iter().map(|&s| s as u8).collect())
                .collect();
            self.by_len.push(words);
        }
    }
}

/// SIA-index of a set of tables. `None` when no SIA product exists; the
/// degenerate 1x1 case reports index 0.
fn table_set_index(
    tables: &[Table],
    n: usize,
    cutoff: u64,
    cache: &mut LyndonCache,
) -> Option<(u64, Vec<u8>)> {
    if n == 1 {
        return Some((0, Vec::new()));
    }
    if !tables_have_sia_product(tables, n) {
        return None;
    }
    for len in 1..=cutoff {
        cache.ensure(len as usize);
        for word in &cache.by_len[len as usize] {
            let mut acc = tables[word[0] as usize];
            for &s in &word[1..] {
                acc = compose(&acc, &tables[s as usize], n);
            }
            if table_is_sia(&acc, n) {
                return Some((len, word.clone()));
            }
        }
    }
    None
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    use itertools::Itertools;
    (0..n as u8).permutations(n).collect()
}

/// Conjugation by a node relabeling: `g = perm . f . perm^-1`.
fn conjugate(f: &Table, perm: &[u8], n: usize) -> Table {
    let mut g = [0u8; MAX_SEARCH_N];
    for i in 0..n {
        g[perm[i] as usize] = perm[f[i] as usize];
    }
    g
}

/// Minimal representative of the set under simultaneous relabeling: the
/// smallest sorted code tuple over all permutations.
fn canonical_codes(codes: &[u64], n: usize, perms: &[Vec<u8>]) -> Vec<u64> {
    let tables: Vec<Table> = codes.iter().map(|&c| decode_table(c, n)).collect();
    let mut best: Option<Vec<u64>> = None;
    for perm in perms {
        let mut candidate: Vec<u64> = tables
            .iter()
            .map(|t| encode_table(&conjugate(t, perm, n), n))
            .collect();
        candidate.sort_unstable();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
    }
    best.unwrap()
}

fn universe_estimate(function_count: u64, m: usize) -> u128 {
    let mut numerator: u128 = 1;
    for i in 0..m {
        numerator = numerator.saturating_mul((function_count as u128).saturating_sub(i as u128));
    }
    let mut denominator: u128 = 1;
    for i in 1..=m {
        denominator *= i as u128;
    }
    numerator / denominator
}

/// Emits every unordered `m`-subset of the n^n automaton patterns, in
/// increasing code order. `ic_only` keeps only initially connected sets;
/// `canonical` keeps one representative per relabeling class (dimensions
/// past 7 fall back to full enumeration).
pub fn enumerate_automaton_sets(
    n: usize,
    m: usize,
    ic_only: bool,
    canonical: bool,
) -> impl Iterator<Item = MatrixSet> {
    assert!((1..=MAX_SEARCH_N).contains(&n), "n must lie in 1..={MAX_SEARCH_N}");
    assert!(m >= 1, "set size must be at least 1");
    let function_count = (n as u64).pow(n as u32);
    let perms = (canonical && n <= MAX_CANONICAL_N).then(|| permutations(n));
    let mut combo: Option<Vec<u64>> = (m as u64 <= function_count)
        .then(|| (0..m as u64).collect());
    std::iter::from_fn(move || loop {
        let codes = combo.as_ref()?.clone();
        // advance to the next combination
        let advanced = {
            let c = combo.as_mut().unwrap();
            let mut advanced = false;
            for i in (0..m).rev() {
                if c[i] < function_count - (m as u64 - i as u64) {
                    c[i] += 1;
                    for j in i + 1..m {
                        c[j] = c[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            advanced
        };
        if !advanced {
            combo = None;
        }
        let tables: Vec<Table> = codes.iter().map(|&c| decode_table(c, n)).collect();
        if let Some(perms) = &perms {
            if canonical_codes(&codes, n, perms) != codes {
                continue;
            }
        }
        if ic_only && !tables_initially_connected(&tables, n) {
            continue;
        }
        let patterns = tables
            .iter()
            .map(|t| BooleanPattern::from_map(&t[..n].iter().map(|&x| x as usize).collect::<Vec<_>>()))
            .collect();
        return Some(MatrixSet::new(patterns).unwrap());
    })
}

struct ChunkOutcome {
    enumerated: u64,
    max: Option<u64>,
    /// `(index, codes, witness)` for sets whose index was at least the
    /// global hint when scanned; filtered against the final max on merge.
    achievers: Vec<(u64, Vec<u64>, Vec<u8>)>,
}

/// Maximum SIA-index over the enumerated universe, with extremal witnesses.
///
/// Deterministic for fixed options: chunk results are merged in code order,
/// so the summary does not depend on the worker count (`wall_time_ms`
/// aside).
pub fn max_sia_index(opts: &SearchOptions) -> Result<SearchSummary> {
    let n = opts.n;
    let m = opts.set_size;
    if n == 0 || n > MAX_SEARCH_N || m == 0 || m > MAX_SEARCH_M {
        return Err(Error::SearchLimits { n, m });
    }
    assert!(opts.workers >= 1, "worker count must be at least 1");
    let function_count = (n as u64).pow(n as u32);
    let estimated = universe_estimate(function_count, m);
    if estimated > opts.budget as u128 {
        return Err(Error::BudgetExceeded { estimated, budget: opts.budget });
    }
    let cutoff = opts.cutoff.unwrap_or_else(|| default_sia_cutoff(n).max(1));
    let canonical = opts.canonical && n <= MAX_CANONICAL_N;
    let perms = canonical.then(|| permutations(n));
    let started = Instant::now();

    if (m as u64) > function_count {
        // fewer distinct patterns than the requested set size: empty universe
        return Ok(SearchSummary {
            n,
            set_size: m,
            ic_only: opts.ic_only,
            canonical,
            cutoff,
            max_index: 0,
            extremal_count: 0,
            enumerated: 0,
            wall_time_ms: started.elapsed().as_millis() as u64,
            extremal_examples: Vec::new(),
        });
    }

    let tables_by_code: Vec<Table> = (0..function_count).map(|c| decode_table(c, n)).collect();
    let images_by_code: Vec<u32> =
        tables_by_code.iter().map(|t| table_image_mask(t, n)).collect();
    let adjacency_by_code: Vec<u64> = if opts.ic_only && n <= 8 {
        tables_by_code.iter().map(|t| table_adjacency_packed(t, n)).collect()
    } else {
        Vec::new()
    };
    let hint = AtomicU32::new(0);
    let ctx = ScanContext {
        tables_by_code: &tables_by_code,
        images_by_code: &images_by_code,
        adjacency_by_code: &adjacency_by_code,
        function_count,
        n,
        cutoff,
        ic_only: opts.ic_only,
        perms: perms.as_deref(),
        hint: &hint,
    };
    let chunk_count = function_count as usize;
    let next_chunk = AtomicU64::new(0);
    let slots: Vec<Mutex<Option<ChunkOutcome>>> =
        (0..chunk_count).map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..opts.workers {
            scope.spawn(|| {
                let mut cache = LyndonCache::new(m);
                let mut codes = vec![0u64; m];
                loop {
                    let c0 = next_chunk.fetch_add(1, Ordering::Relaxed);
                    if c0 >= function_count {
                        break;
                    }
                    let mut outcome =
                        ChunkOutcome { enumerated: 0, max: None, achievers: Vec::new() };
                    codes[0] = c0;
                    scan_suffixes(&ctx, &mut codes, 1, c0 + 1, &mut cache, &mut outcome);
                    *slots[c0 as usize].lock().unwrap() = Some(outcome);
                }
            });
        }
    });

    // ordered, associative merge
    let mut enumerated = 0u64;
    let mut max: Option<u64> = None;
    let mut achievers: Vec<(u64, Vec<u64>, Vec<u8>)> = Vec::new();
    for slot in &slots {
        let outcome = slot.lock().unwrap().take().expect("chunk completed");
        enumerated += outcome.enumerated;
        if let Some(chunk_max) = outcome.max {
            if max.is_none_or(|m| chunk_max > m) {
                max = Some(chunk_max);
            }
        }
        achievers.extend(outcome.achievers);
    }
    let max_index = max.unwrap_or(0);
    achievers.retain(|(len, _, _)| *len == max_index && max.is_some());

    let (extremal_count, examples) = summarize_achievers(
        &achievers,
        n,
        m,
        cutoff,
        max_index,
        opts.max_examples,
    );

    Ok(SearchSummary {
        n,
        set_size: m,
        ic_only: opts.ic_only,
        canonical,
        cutoff,
        max_index,
        extremal_count,
        enumerated,
        wall_time_ms: started.elapsed().as_millis() as u64,
        extremal_examples: examples,
    })
}

struct ScanContext<'a> {
    tables_by_code: &'a [Table],
    images_by_code: &'a [u32],
    /// Packed union-graph rows per code; filled only for IC runs at n <= 8.
    adjacency_by_code: &'a [u64],
    function_count: u64,
    n: usize,
    cutoff: u64,
    ic_only: bool,
    perms: Option<&'a [Vec<u8>]>,
    hint: &'a AtomicU32,
}

fn scan_suffixes(
    ctx: &ScanContext<'_>,
    codes: &mut Vec<u64>,
    depth: usize,
    start: u64,
    cache: &mut LyndonCache,
    outcome: &mut ChunkOutcome,
) {
    let m = codes.len();
    if depth == m {
        process_set(ctx, codes, cache, outcome);
        return;
    }
    // leave room for the remaining positions
    let last = ctx.function_count - (m as u64 - depth as u64);
    for c in start..=last.min(ctx.function_count - 1) {
        codes[depth] = c;
        scan_suffixes(ctx, codes, depth + 1, c + 1, cache, outcome);
    }
}

fn process_set(
    ctx: &ScanContext<'_>,
    codes: &[u64],
    cache: &mut LyndonCache,
    outcome: &mut ChunkOutcome,
) {
    let n = ctx.n;
    if let Some(perms) = ctx.perms {
        if canonical_codes(codes, n, perms) != codes {
            return;
        }
    }
    if ctx.ic_only {
        let mut incoming = 0u32;
        for &code in codes {
            incoming |= ctx.images_by_code[code as usize];
        }
        let connected = if ctx.adjacency_by_code.is_empty() {
            let tables: Vec<Table> = codes
                .iter()
                .map(|&c| ctx.tables_by_code[c as usize])
                .collect();
            tables_initially_connected(&tables, n)
        } else {
            let mut adj = 0u64;
            for &code in codes {
                adj |= ctx.adjacency_by_code[code as usize];
            }
            initially_connected_packed(adj, incoming, n)
        };
        if !connected {
            return;
        }
    }
    outcome.enumerated += 1;
    let mut tables = [Table::default(); MAX_SEARCH_M];
    for (slot, &code) in tables.iter_mut().zip(codes) {
        *slot = ctx.tables_by_code[code as usize];
    }
    let tables = &tables[..codes.len()];
    if let Some((len, word)) = table_set_index(tables, n, ctx.cutoff, cache) {
        if outcome.max.is_none_or(|m| len > m) {
            outcome.max = Some(len);
        }
        // record any candidate at or above the best index seen anywhere so
        // far; sub-maximal entries are dropped on merge
        if len >= ctx.hint.load(Ordering::Relaxed) as u64 {
            ctx.hint.fetch_max(len as u32, Ordering::Relaxed);
            outcome.achievers.push((len, codes.to_vec(), word));
        }
    }
}

fn summarize_achievers(
    achievers: &[(u64, Vec<u64>, Vec<u8>)],
    n: usize,
    m: usize,
    cutoff: u64,
    max_index: u64,
    max_examples: usize,
) -> (u64, Vec<ExtremalExample>) {
    if achievers.is_empty() {
        return (0, Vec::new());
    }
    if n <= MAX_CANONICAL_N {
        // count and exhibit maximizers up to relabeling
        let perms = permutations(n);
        let mut forms: HashSet<Vec<u64>> = HashSet::new();
        for (_, codes, _) in achievers {
            forms.insert(canonical_codes(codes, n, &perms));
        }
        let count = forms.len() as u64;
        let mut reps: Vec<Vec<u64>> = forms.into_iter().collect();
        reps.sort_unstable();
        reps.truncate(max_examples);
        let mut cache = LyndonCache::new(m);
        let examples = reps
            .iter()
            .map(|codes| {
                let tables: Vec<Table> = codes.iter().map(|&c| decode_table(c, n)).collect();
                let (len, word) =
                    table_set_index(&tables, n, cutoff, &mut cache).expect("maximizer is SIA");
                debug_assert_eq!(len, max_index);
                example_from_codes(codes, n, &word)
            })
            .collect();
        (count, examples)
    } else {
        // canonicalization is off at this size; report raw sets
        let count = achievers.len() as u64;
        let examples = achievers
            .iter()
            .take(max_examples)
            .map(|(_, codes, word)| example_from_codes(codes, n, word))
            .collect();
        (count, examples)
    }
}

fn example_from_codes(codes: &[u64], n: usize, word: &[u8]) -> ExtremalExample {
    let patterns = codes
        .iter()
        .map(|&c| {
            let t = decode_table(c, n);
            BooleanPattern::from_map(&t[..n].iter().map(|&x| x as usize).collect::<Vec<_>>())
        })
        .collect();
    let set = MatrixSet::new(patterns).unwrap();
    let witness = Word::new(word.iter().map(|&s| s as u16).collect());
    ExtremalExample {
        witness: witness.render(set.labels()),
        witness_symbols: witness.symbols().to_vec(),
        set: MatrixSetDoc::from_set(&set),
    }
}
