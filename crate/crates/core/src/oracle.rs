//! Literal reference implementations.
//!
//! Everything here is computed straight from the definitions: periods by
//! trying every candidate, period-maximality by checking one-step
//! extensions, Lyndon words by comparing against every proper suffix.
//! Nothing is shared with the ownership-based fast path in
//! [`crate::analysis`] beyond the result types.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::analysis::{self, IdleReport, LyndonRoot, LyndonRootSet, OrderTags, PmInterval};
use crate::error::{Error, Result};
use crate::word::{Interval, Letter, Order, Word};

fn naive_period(s: &[u8]) -> usize {
    (1..=s.len())
        .find(|&p| (0..s.len() - p).all(|i| s[i] == s[i + p]))
        .unwrap_or(0)
}

fn naive_lyndon(s: &[u8], order: Order) -> bool {
    let smaller = order.smaller().bit();
    let less = |u: &[u8], v: &[u8]| {
        for (&x, &y) in u.iter().zip(v) {
            if x != y {
                return x == smaller;
            }
        }
        u.len() < v.len()
    };
    (1..s.len()).all(|i| less(s, &s[i..]))
}

/// Smallest periods of all factors: `table[i][j - i]` for `w[i..=j]`, 0-based.
fn period_table(s: &[u8]) -> Vec<Vec<usize>> {
    (0..s.len())
        .map(|i| (i..s.len()).map(|j| naive_period(&s[i..=j])).collect())
        .collect()
}

fn pm_intervals_from_table(s: &[u8], table: &[Vec<usize>]) -> Vec<PmInterval> {
    let n = s.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let p = table[i][j - i];
            let left_ok = i == 0 || table[i - 1][j - i + 1] != p;
            let right_ok = j + 1 == n || table[i][j + 1 - i] != p;
            if left_ok && right_ok {
                out.push(PmInterval::from_offsets(s, i, j, p));
            }
        }
    }
    out.sort();
    out
}

/// Every period-maximal interval of `w`, sorted by `(start, end)`.
pub fn naive_period_maximal_intervals(w: &Word) -> Vec<PmInterval> {
    let s = w.to_bits();
    pm_intervals_from_table(&s, &period_table(&s))
}

fn lroots_unchecked(s: &[u8], pm: &PmInterval) -> LyndonRootSet {
    let (start, end, p) = (pm.start() - 1, pm.end() - 1, pm.period);
    let admitted: Vec<Order> = match pm.breaking_letter {
        Some(a) => vec![Order::favoring(a)],
        None => Order::BOTH.to_vec(),
    };
    let mut set = LyndonRootSet::new(*pm);
    for i in start + 1..=end {
        if i + p > end + 1 {
            break;
        }
        let window = &s[i..i + p];
        if !admitted.iter().any(|&o| naive_lyndon(window, o)) {
            continue;
        }
        let orders = OrderTags {
            zero_first: naive_lyndon(window, Order::ZeroFirst),
            one_first: naive_lyndon(window, Order::OneFirst),
        };
        set.insert(LyndonRoot {
            interval: Interval::new(i + 1, i + p),
            orders,
        });
    }
    set
}

/// `Lroots(s)` by scanning every length-`p` window after the start of `s`.
pub fn naive_lroots(w: &Word, s: &PmInterval) -> Result<LyndonRootSet> {
    s.interval.validate(w.len())?;
    let bits = w.to_bits();
    let (i, j) = (s.start() - 1, s.end() - 1);
    let p = naive_period(&bits[i..=j]);
    let extends_left = i > 0 && naive_period(&bits[i - 1..=j]) == p;
    let extends_right = j + 1 < bits.len() && naive_period(&bits[i..=j + 1]) == p;
    if p != s.period || extends_left || extends_right {
        return Err(Error::NotPeriodMaximal { start: s.start(), end: s.end() });
    }
    let pm = PmInterval::from_offsets(&bits, i, j, p);
    Ok(lroots_unchecked(&bits, &pm))
}

/// Root sets of every period-maximal interval (empty ones included).
pub fn naive_all_root_sets(w: &Word) -> Vec<LyndonRootSet> {
    let s = w.to_bits();
    let table = period_table(&s);
    pm_intervals_from_table(&s, &table)
        .iter()
        .map(|pm| lroots_unchecked(&s, pm))
        .collect()
}

/// Like [`analysis::all_intervals_with_roots`], but from the literal scan.
pub fn naive_intervals_with_roots(w: &Word) -> BTreeMap<Interval, LyndonRootSet> {
    naive_all_root_sets(w)
        .into_iter()
        .filter(|set| !set.is_empty())
        .map(|set| (set.owner.interval, set))
        .collect()
}

pub fn naive_runs(w: &Word) -> Vec<PmInterval> {
    naive_period_maximal_intervals(w)
        .into_iter()
        .filter(|s| s.is_run)
        .collect()
}

fn charged_of(sets: &[LyndonRootSet]) -> BTreeSet<usize> {
    sets.iter()
        .filter(|set| set.owner.is_run)
        .filter_map(|set| set.b.last().copied())
        .collect()
}

fn without_max(b: &BTreeSet<usize>) -> impl Iterator<Item = usize> + '_ {
    let max = b.last().copied();
    b.iter().copied().filter(move |&k| Some(k) != max)
}

fn d_from_sets(sets: &[LyndonRootSet], idle: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut d = BTreeSet::new();
    for set in sets {
        let s = &set.owner;
        if s.is_closed() && !s.is_run {
            d.extend(set.b.iter().copied());
        }
        if !s.is_run {
            continue;
        }
        match s.breaking_letter {
            Some(a) => d.extend(without_max(set.b_for(a))),
            None => {
                let a = if s.period == 1 {
                    Letter::Zero
                } else {
                    let min0 = set.b0.first();
                    let min1 = set.b1.first();
                    if min0 >= min1 {
                        Letter::Zero
                    } else {
                        Letter::One
                    }
                };
                d.extend(without_max(set.b_for(a)));
            }
        }
    }
    d.retain(|k| idle.contains(k));
    d
}

fn d_prime_from_sets(s: &[u8], sets: &[LyndonRootSet], idle: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut d = BTreeSet::new();
    for set in sets {
        let owner = &set.owner;
        if !owner.left_open && !owner.is_run {
            d.extend(set.b.last().copied());
        }
        d.extend(without_max(&set.b));
    }
    let n = s.len();
    for k in 2..=n {
        let a = s[k - 1];
        if s[k - 2] != a && s[k - 1..].iter().all(|&x| x == a) {
            d.insert(k);
        }
    }
    d.retain(|k| idle.contains(k));
    d
}

/// Runs, charged and idle positions, `D` and `D′`, all from the literal scan.
pub fn naive_idle_report(w: &Word) -> IdleReport {
    let s = w.to_bits();
    let sets = naive_all_root_sets(w);
    let charged = charged_of(&sets);
    let idle_set: BTreeSet<usize> = (1..=s.len()).filter(|k| !charged.contains(k)).collect();
    IdleReport {
        runs: sets.iter().map(|set| set.owner).filter(|o| o.is_run).collect(),
        d: d_from_sets(&sets, &idle_set),
        d_prime: d_prime_from_sets(&s, &sets, &idle_set),
        idle: idle_set.into_iter().collect(),
        charged,
    }
}

pub fn naive_d(w: &Word) -> BTreeSet<usize> {
    naive_idle_report(w).d
}

pub fn naive_d_prime(w: &Word) -> BTreeSet<usize> {
    naive_idle_report(w).d_prime
}

/// A property violated by a specific word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub word: Word,
    pub what: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.word, self.what)
    }
}

/// Checks that the sets `B(s)` over all period-maximal intervals of `w` are
/// pairwise disjoint.
pub fn check_disjoint_roots(w: &Word) -> std::result::Result<(), Violation> {
    let mut seen: BTreeMap<usize, Interval> = BTreeMap::new();
    for set in naive_all_root_sets(w) {
        for &k in &set.b {
            if let Some(prev) = seen.insert(k, set.owner.interval) {
                return Err(Violation {
                    word: w.clone(),
                    what: format!("position {k} lies in B({prev}) and B({})", set.owner.interval),
                });
            }
        }
    }
    Ok(())
}

/// Compares the fast path against the literal scan on `w`: root sets,
/// ownership of every position, runs, charged and idle positions, `D`, `D′`.
pub fn check_fast_path(w: &Word) -> std::result::Result<(), Violation> {
    let fail = |what: String| Err(Violation { word: w.clone(), what });
    let naive_sets = naive_intervals_with_roots(w);
    let fast_sets = analysis::all_intervals_with_roots(w);
    if naive_sets != fast_sets {
        let first = naive_sets
            .keys()
            .chain(fast_sets.keys())
            .find(|k| naive_sets.get(k) != fast_sets.get(k))
            .copied();
        return fail(format!("root sets differ first at {first:?}"));
    }
    let s = w.to_bits();
    let ownership = analysis::ownership(w);
    for k in 2..=s.len() {
        let a = s[k - 1];
        let tail_shape = s[k - 2] != a && s[k - 1..].iter().all(|&x| x == a);
        match (ownership.get(k), tail_shape) {
            (None, true) => {}
            (Some(o), false) => {
                let in_b = naive_sets
                    .get(&o.owner.interval)
                    .is_some_and(|set| set.b.contains(&k));
                if !in_b {
                    return fail(format!("position {k} not in B({})", o.owner.interval));
                }
            }
            (got, _) => return fail(format!("ownership of position {k} is {got:?}")),
        }
    }
    let naive = naive_idle_report(w);
    let fast = analysis::idle_report(w);
    if naive != fast {
        return fail(format!("idle reports differ: naive {naive:?}, fast {fast:?}"));
    }
    Ok(())
}

/// Checks `|D(uwv) ∩ [|u|+2..|uw|-1]| >= |D(w)|`.
pub fn check_d_extension(u: &Word, w: &Word, v: &Word) -> std::result::Result<(), Violation> {
    let inner = analysis::compute_d(w).len();
    let whole = u.concat(w).concat(v);
    let (lo, hi) = (u.len() + 2, (u.len() + w.len()).saturating_sub(1));
    let outer = if hi < lo { 0 } else { analysis::compute_d(&whole).range(lo..=hi).count() };
    if outer < inner {
        return Err(Violation {
            word: whole,
            what: format!("u={u} w={w} v={v}: |D(w)| = {inner} but only {outer} positions of D(uwv) in [{lo}..{hi}]"),
        });
    }
    Ok(())
}

/// Checks that `k ∈ D′(w)` implies `|u| + k ∈ D′(uw)`, and the counting form
/// `|D′(uw) ∩ [|u|+2..|uw|]| >= |D′(w)|`.
pub fn check_d_prime_extension(u: &Word, w: &Word) -> std::result::Result<(), Violation> {
    let inner = analysis::compute_d_prime(w);
    let whole = u.concat(w);
    let outer = analysis::compute_d_prime(&whole);
    if let Some(k) = inner.iter().find(|&&k| !outer.contains(&(u.len() + k))) {
        return Err(Violation {
            word: whole,
            what: format!("u={u} w={w}: {k} in D′(w) but {} not in D′(uw)", u.len() + k),
        });
    }
    let counted = outer.range(u.len() + 2..).count();
    if counted < inner.len() {
        return Err(Violation {
            word: whole,
            what: format!("u={u} w={w}: |D′(w)| = {} but {counted} in the shifted range", inner.len()),
        });
    }
    Ok(())
}

/// A uniformly random word of length `len`.
pub fn random_word<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> Word {
    (0..len).map(|_| Letter::from_bit(rng.gen_range(0..=1))).collect()
}

/// `Ordering` of two words by length, then content; used to list witnesses.
pub fn shortlex(u: &Word, v: &Word) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.to_string().cmp(&v.to_string()))
}
