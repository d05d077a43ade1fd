//! Exhaustive search for `m_d`, the least length at which every binary word
//! has at least `d` positions in `D(w)`.
//!
//! The search grows words to the right from the seed `0` (complements have
//! the same `D`, so words starting with `1` are redundant). A word with
//! `|D(w)| >= d` is not extended further since `|D|` never drops under
//! extension. Known values `m_{d'}` for `d' < d` allow stopping earlier: once
//! `|D(w) ∩ [1..h - m_{d'} + 1]| >= d - d'`, every extension of `w` of length
//! at least `h` already has `d` positions in `D`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Kernel;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::word::Word;

/// `(d, m_d)` for `d = 1..=20` as published alongside the original search.
pub const REFERENCE_TABLE: [(usize, usize); 20] = [
    (1, 63),
    (2, 96),
    (3, 126),
    (4, 150),
    (5, 172),
    (6, 194),
    (7, 216),
    (8, 237),
    (9, 258),
    (10, 274),
    (11, 295),
    (12, 314),
    (13, 332),
    (14, 351),
    (15, 369),
    (16, 388),
    (17, 407),
    (18, 425),
    (19, 444),
    (20, 462),
];

/// Previously established values `d' -> m_{d'}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct KnownTable {
    entries: BTreeMap<usize, usize>,
}

impl KnownTable {
    pub fn new() -> KnownTable {
        KnownTable::default()
    }

    pub fn reference() -> KnownTable {
        REFERENCE_TABLE.iter().copied().collect()
    }

    pub fn insert(&mut self, d: usize, m: usize) {
        self.entries.insert(d, m);
    }

    pub fn get(&self, d: usize) -> Option<usize> {
        self.entries.get(&d).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|(&d, &m)| (d, m))
    }

    /// Entries with `d' < d`.
    pub fn below(&self, d: usize) -> KnownTable {
        self.iter().filter(|&(k, _)| k < d).collect()
    }

    /// Parses `{"1":63,"2":96}`.
    pub fn from_json(text: &str) -> Result<KnownTable> {
        let raw: BTreeMap<String, usize> = serde_json::from_str(text)?;
        let mut table = KnownTable::new();
        for (k, m) in raw {
            let d = k
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("table key {k:?} is not a decimal integer")))?;
            table.insert(d, m);
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<KnownTable> {
        KnownTable::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let raw: BTreeMap<String, usize> = self.iter().map(|(d, m)| (d.to_string(), m)).collect();
        serde_json::to_string(&raw).expect("string map serializes")
    }

    /// Structural checks: keys start at 1, values strictly increase, and
    /// `m_{d'} >= d' + 2` (D(w) lies inside `[2..|w|-1]`).
    pub fn validate(&self) -> Result<()> {
        let mut prev: Option<(usize, usize)> = None;
        for (d, m) in self.iter() {
            if d == 0 {
                return Err(Error::Config("table key 0 is not a valid d".into()));
            }
            if m < d + 2 {
                return Err(Error::Config(format!("m_{d} = {m} is below the trivial floor {}", d + 2)));
            }
            if let Some((pd, pm)) = prev {
                if m <= pm {
                    return Err(Error::Config(format!("m_{d} = {m} does not exceed m_{pd} = {pm}")));
                }
            }
            prev = Some((d, m));
        }
        Ok(())
    }

    /// Compares the table against the reference values, reporting the first
    /// disagreement.
    pub fn check_reference(&self) -> std::result::Result<(), String> {
        for (d, m) in self.iter() {
            match REFERENCE_TABLE.iter().find(|&&(rd, _)| rd == d) {
                Some(&(_, rm)) if rm == m => {}
                Some(&(_, rm)) => return Err(format!("m_{d} = {m}, reference value is {rm}")),
                None => return Err(format!("no reference value for d = {d}")),
            }
        }
        Ok(())
    }
}

impl FromIterator<(usize, usize)> for KnownTable {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> KnownTable {
        KnownTable {
            entries: iter.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub known_prune: bool,
    /// Length at which the tree is cut into independent subtrees.
    pub split_depth: usize,
    pub checkpoint: Option<PathBuf>,
    /// Nodes between checkpoint flushes.
    pub checkpoint_every: u64,
    /// Stop (as if interrupted) after this many checkpoint flushes.
    pub stop_after_flushes: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            threads: None,
            known_prune: true,
            split_depth: 12,
            checkpoint: None,
            checkpoint_every: 1_000_000,
            stop_after_flushes: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PrunedCounts {
    /// Nodes with `|D(w)| >= d`.
    pub basic: u64,
    /// Nodes cut by the known-table condition.
    pub known_table: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub d: usize,
    pub m_d: usize,
    pub nodes_visited: u64,
    /// A word of length `m_d` whose prefix of length `m_d - 1` has `|D| < d`.
    pub deepest_word: Word,
    /// All words of length `m_d - 1` starting with `0` with `|D| < d`.
    pub critical_words: Vec<Word>,
    pub pruned_counts: PrunedCounts,
    /// False when the search stopped early; `m_d` is then only a lower bound.
    pub completed: bool,
}

/// Search state that can be persisted and resumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub d: usize,
    pub best: usize,
    pub pending: Vec<Word>,
}

impl Checkpoint {
    /// `d=<d> best=<m>` followed by one pending prefix per line.
    pub fn render(&self) -> String {
        let mut out = format!("d={} best={}\n", self.d, self.best);
        for w in &self.pending {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Checkpoint> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Checkpoint("empty file".into()))?;
        let field = |name: &str| -> Result<usize> {
            header
                .split_whitespace()
                .find_map(|kv| kv.strip_prefix(name).and_then(|v| v.strip_prefix('=')))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Checkpoint(format!("header {header:?} lacks {name}=<n>")))
        };
        let (d, best) = (field("d")?, field("best")?);
        let pending = lines
            .filter(|l| !l.is_empty())
            .map(|l| l.parse::<Word>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Checkpoint { d, best, pending })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.render().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Checkpoint> {
        Checkpoint::parse(&fs::read_to_string(path)?)
    }
}

/// Whether `|D(w) ∩ [1..m - m_{d'} + 1]| >= d - d'`, given the 1-based
/// positions of `D(w)` in ascending order.
pub fn prune_known_positions(d_positions: &[usize], d: usize, d_known: usize, m_known: usize, m: usize) -> bool {
    debug_assert!(d_known < d);
    if m < m_known {
        return false;
    }
    let window = m - m_known + 1;
    d_positions.iter().take_while(|&&k| k <= window).count() >= d - d_known
}

/// The known-table stopping condition for `w`.
pub fn should_prune_known(w: &Word, d: usize, d_known: usize, m_known: usize, m: usize) -> bool {
    let mut out = Vec::new();
    Kernel::new().d_positions(&w.to_bits(), &mut out);
    prune_known_positions(&out, d, d_known, m_known, m)
}

struct Shared {
    d: usize,
    known: Vec<(usize, usize)>,
    best: AtomicUsize,
    frontier_depth: Option<usize>,
}

#[derive(Default)]
struct Outcome {
    nodes: u64,
    pruned: PrunedCounts,
    pending: Vec<Vec<u8>>,
    critical_len: usize,
    critical: BTreeSet<Vec<u8>>,
}

impl Outcome {
    fn record_critical(&mut self, w: &[u8]) {
        if w.len() > self.critical_len {
            self.critical_len = w.len();
            self.critical.clear();
        }
        if w.len() == self.critical_len {
            self.critical.insert(w.to_vec());
        }
    }

    fn merge(&mut self, other: Outcome) {
        self.nodes += other.nodes;
        self.pruned.basic += other.pruned.basic;
        self.pruned.known_table += other.pruned.known_table;
        self.pending.extend(other.pending);
        if other.critical_len > self.critical_len {
            self.critical_len = other.critical_len;
            self.critical = other.critical;
        } else if other.critical_len == self.critical_len {
            self.critical.extend(other.critical);
        }
    }
}

struct Worker<'a> {
    shared: &'a Shared,
    kernel: Kernel,
    positions: Vec<usize>,
    out: Outcome,
}

impl Worker<'_> {
    /// Visits `w`; returns whether its children should be explored.
    fn visit(&mut self, w: &[u8], parent_count: Option<usize>) -> (bool, usize) {
        let shared = self.shared;
        self.out.nodes += 1;
        let best = shared.best.fetch_max(w.len(), Ordering::Relaxed).max(w.len());
        self.kernel.d_positions(w, &mut self.positions);
        let count = self.positions.len();
        if let Some(pc) = parent_count {
            debug_assert!(count >= pc, "|D| decreased on extension to {w:?}");
        }
        if count >= shared.d {
            self.out.pruned.basic += 1;
            return (false, count);
        }
        self.out.record_critical(w);
        // Horizon best - 1: no word of that length with |D| < d is cut, so
        // the critical words are found whatever the schedule.
        let horizon = best - 1;
        let cut = shared
            .known
            .iter()
            .any(|&(dk, mk)| prune_known_positions(&self.positions, shared.d, dk, mk, horizon));
        if cut {
            self.out.pruned.known_table += 1;
            return (false, count);
        }
        (true, count)
    }

    /// Depth-first exploration of the subtree at `root`, stopping after
    /// `budget` visits; unexplored subtrees go to `pending`.
    fn explore(&mut self, root: Vec<u8>, budget: u64) {
        let base = root.len();
        let mut buf = root;
        let mut counts: Vec<usize> = Vec::new();
        let mut visits = 0u64;
        let mut parent: Option<usize> = None;
        loop {
            if self.shared.frontier_depth == Some(buf.len()) && buf.len() > base {
                self.out.pending.push(buf.clone());
                if !self.backtrack(&mut buf, base, &mut counts) {
                    return;
                }
                parent = counts.last().copied();
                continue;
            }
            if visits >= budget {
                self.out.pending.push(buf.clone());
                for q in base..buf.len() {
                    if buf[q] == 0 {
                        let mut sibling = buf[..=q].to_vec();
                        sibling[q] = 1;
                        self.out.pending.push(sibling);
                    }
                }
                return;
            }
            visits += 1;
            let (expand, count) = self.visit(&buf, parent);
            if expand {
                counts.push(count);
                buf.push(0);
                parent = Some(count);
            } else {
                if !self.backtrack(&mut buf, base, &mut counts) {
                    return;
                }
                parent = counts.last().copied();
            }
        }
    }

    /// Moves `buf` to the next unvisited node; false when the subtree is done.
    fn backtrack(&mut self, buf: &mut Vec<u8>, base: usize, counts: &mut Vec<usize>) -> bool {
        loop {
            if buf.len() <= base {
                return false;
            }
            let last = buf.len() - 1;
            if buf[last] == 0 {
                buf[last] = 1;
                return true;
            }
            buf.pop();
            counts.pop();
        }
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    builder.build().map_err(|e| Error::Config(e.to_string()))
}

/// Checks the known table used for pruning `d`: structure, and the `d' = 1`
/// entry (if present) by recomputation.
pub fn validate_known(d: usize, known: &KnownTable) -> Result<KnownTable> {
    let used = known.below(d);
    used.validate()?;
    if let Some(m1) = used.get(1) {
        let fresh = run(1, &KnownTable::new(), &SearchOptions { known_prune: false, ..Default::default() }, None)?;
        if fresh.m_d != m1 {
            return Err(Error::Config(format!(
                "known table gives m_1 = {m1}, recomputation gives {}",
                fresh.m_d
            )));
        }
    }
    Ok(used)
}

/// Runs the search for `m_d`.
pub fn compute_m_d(d: usize, known: &KnownTable, options: &SearchOptions) -> Result<SearchResult> {
    if d == 0 {
        return Err(Error::Config("d must be at least 1".into()));
    }
    let used = if options.known_prune { validate_known(d, known)? } else { KnownTable::new() };
    run(d, &used, options, None)
}

/// Continues a search from a checkpoint file.
pub fn resume(path: &Path, known: &KnownTable, options: &SearchOptions) -> Result<SearchResult> {
    let cp = Checkpoint::read(path)?;
    if cp.d == 0 {
        return Err(Error::Checkpoint("d must be at least 1".into()));
    }
    let used = if options.known_prune { validate_known(cp.d, known)? } else { KnownTable::new() };
    run(cp.d, &used, options, Some(cp))
}

fn run(d: usize, known: &KnownTable, options: &SearchOptions, from: Option<Checkpoint>) -> Result<SearchResult> {
    let pool = pool(options.threads)?;
    let shared = Shared {
        d,
        known: known.below(d).iter().collect(),
        best: AtomicUsize::new(from.as_ref().map_or(0, |c| c.best)),
        frontier_depth: None,
    };
    let mut total = Outcome::default();
    let mut queue: Vec<Vec<u8>> = match from {
        Some(cp) => cp.pending.iter().map(Word::to_bits).collect(),
        None => {
            // Cut the tree at the split depth.
            let splitter = Shared {
                frontier_depth: Some(options.split_depth.max(1)),
                known: shared.known.clone(),
                best: AtomicUsize::new(0),
                d,
            };
            let mut w = Worker { shared: &splitter, kernel: Kernel::new(), positions: Vec::new(), out: Outcome::default() };
            w.explore(vec![0], u64::MAX);
            shared.best.fetch_max(splitter.best.load(Ordering::Relaxed), Ordering::Relaxed);
            let mut out = w.out;
            let pending = std::mem::take(&mut out.pending);
            total.merge(out);
            pending
        }
    };
    // LIFO keeps the pending set small; reverse so the 0-branch goes first.
    queue.reverse();

    let checkpointing = options.checkpoint.is_some();
    let threads = pool.current_num_threads().max(1);
    let batch_size = if checkpointing { threads * 8 } else { usize::MAX };
    let per_item = if checkpointing {
        (options.checkpoint_every / (threads as u64 * 8)).max(1)
    } else {
        u64::MAX
    };
    let mut since_flush = 0u64;
    let mut flushes = 0usize;

    while !queue.is_empty() {
        let take = batch_size.min(queue.len());
        let batch: Vec<Vec<u8>> = queue.split_off(queue.len() - take);
        let outcomes: Vec<Outcome> = pool.install(|| {
            batch
                .into_par_iter()
                .map(|root| {
                    let mut w = Worker { shared: &shared, kernel: Kernel::new(), positions: Vec::new(), out: Outcome::default() };
                    w.explore(root, per_item);
                    w.out
                })
                .collect()
        });
        for mut o in outcomes {
            since_flush += o.nodes;
            o.pending.reverse();
            queue.append(&mut o.pending);
            total.merge(o);
        }
        if let Some(path) = &options.checkpoint {
            if since_flush >= options.checkpoint_every || queue.is_empty() {
                since_flush = 0;
                flushes += 1;
                let cp = snapshot(d, shared.best.load(Ordering::Relaxed), &queue, &total);
                cp.write(path)?;
                if options.stop_after_flushes.is_some_and(|n| flushes >= n) && !queue.is_empty() {
                    return Ok(finish(d, &shared, total, false));
                }
            }
        }
    }
    Ok(finish(d, &shared, total, true))
}

/// Pending subtrees plus the current critical words, prefix-free.
fn snapshot(d: usize, best: usize, queue: &[Vec<u8>], total: &Outcome) -> Checkpoint {
    let crit_len = total.critical_len;
    let mut pending: Vec<Word> = total.critical.iter().map(|w| Word::from_bits(w)).collect();
    pending.extend(
        queue
            .iter()
            .rev()
            .filter(|w| w.len() <= crit_len || !total.critical.contains(&w[..crit_len]))
            .map(|w| Word::from_bits(w)),
    );
    Checkpoint { d, best, pending }
}

fn finish(d: usize, shared: &Shared, total: Outcome, completed: bool) -> SearchResult {
    let m_d = shared.best.load(Ordering::Relaxed);
    let critical_words: Vec<Word> = if total.critical_len + 1 == m_d {
        total.critical.iter().map(|w| Word::from_bits(w)).collect()
    } else {
        Vec::new()
    };
    let deepest_word = critical_words
        .first()
        .map(|w| {
            let mut w = w.clone();
            w.push(crate::word::Letter::Zero);
            w
        })
        .unwrap_or_default();
    SearchResult {
        d,
        m_d,
        nodes_visited: total.nodes,
        deepest_word,
        critical_words,
        pruned_counts: total.pruned,
        completed,
    }
}

/// The minimum of `|D′(w)|` over all words of length `len`, with the
/// first minimizing word in lexicographic order.
pub fn dprime_floor(len: usize, budget: Budget) -> Result<(usize, Word)> {
    if len == 0 {
        return Err(Error::Config("length must be at least 1".into()));
    }
    budget.check(len)?;
    let words = 1u64 << (len - 1);
    let decode = |x: u64| -> Vec<u8> { (0..len).map(|i| (x >> (len - 1 - i)) as u8 & 1).collect() };
    let (count, x) = (0..words)
        .into_par_iter()
        .map_init(
            || (Kernel::new(), Vec::new()),
            |(kernel, out), x| {
                kernel.d_prime_positions(&decode(x), out);
                (out.len(), x)
            },
        )
        .min()
        .expect("at least one word");
    Ok((count, Word::from_bits(&decode(x))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn table_json_roundtrip() {
        let t = KnownTable::from_json(r#"{"1":63,"2":96}"#).unwrap();
        assert_eq!(t.get(2), Some(96));
        assert_eq!(t.to_json(), r#"{"1":63,"2":96}"#);
        assert!(KnownTable::from_json(r#"{"x":3}"#).is_err());
        assert!(KnownTable::from_json(r#"[1,2]"#).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(KnownTable::reference().validate().is_ok());
        assert!(KnownTable::reference().check_reference().is_ok());
        let bad: KnownTable = [(1, 63), (2, 60)].into_iter().collect();
        assert!(bad.validate().is_err());
        let bad: KnownTable = [(1, 2)].into_iter().collect();
        assert!(bad.validate().is_err());
        let off: KnownTable = [(1, 64)].into_iter().collect();
        assert!(off.check_reference().is_err());
        assert!(matches!(validate_known(2, &off), Err(Error::Config(_))));
        // Entries at or above d are ignored.
        assert_eq!(validate_known(2, &KnownTable::reference()).unwrap().len(), 1);
    }

    #[test]
    fn checkpoint_format() {
        let cp = Checkpoint { d: 2, best: 40, pending: vec![w("0010"), w("011")] };
        assert_eq!(cp.render(), "d=2 best=40\n0010\n011\n");
        assert_eq!(Checkpoint::parse(&cp.render()).unwrap(), cp);
        assert!(Checkpoint::parse("").is_err());
        assert!(Checkpoint::parse("d=2\n").is_err());
        assert!(Checkpoint::parse("d=2 best=3\n01a\n").is_err());
    }

    #[test]
    fn prune_predicate() {
        // D(1110101101) = {2}
        let word = w("1110101101");
        assert!(should_prune_known(&word, 2, 1, 63, 64));
        assert!(!should_prune_known(&word, 3, 1, 63, 64));
        assert!(!should_prune_known(&word, 2, 1, 63, 63));
        assert!(!should_prune_known(&w("0110"), 2, 1, 63, 200));
        assert!(!should_prune_known(&word, 2, 1, 63, 10));
    }

    #[test]
    fn tiny_searches() {
        let opts = SearchOptions { threads: Some(2), ..Default::default() };
        let r = compute_m_d(1, &KnownTable::new(), &opts).unwrap();
        assert_eq!(r.m_d, 63);
        assert!(r.completed);
        assert_eq!(r.deepest_word.len(), 63);
        assert!(compute_m_d(0, &KnownTable::new(), &opts).is_err());
    }

    #[test]
    fn dprime_floor_small() {
        assert_eq!(dprime_floor(1, Budget::default()).unwrap().0, 0);
        assert_eq!(dprime_floor(2, Budget::default()).unwrap(), (0, w("00")));
        assert!(dprime_floor(0, Budget::default()).is_err());
        assert!(matches!(
            dprime_floor(30, Budget::default()),
            Err(Error::BudgetExceeded { requested: 30, limit: 22 })
        ));
    }
}
