//! Period-maximal intervals, their Lyndon-root sets, and idle positions.
//!
//! Every position `k >= 2` of a word, except the first letter of a final
//! block `ā a⁺`, starts a Lyndon root of exactly one period-maximal
//! interval. That interval is found locally: for `w[k] = w[k-1]` it is the
//! block around `k`; otherwise it is the period-maximal extension of the
//! longest Lyndon word starting at `k` under the order favoring `w[k]`.
//! Grouping positions by owner reconstructs every root set `B(s)` without
//! enumerating the quadratically many intervals of the word.

mod kernel;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

pub use kernel::Kernel;
pub(crate) use kernel::{extend, last_block_start, owner_at, Owned};

use crate::error::{Error, Result};
use crate::word::{smallest_period_slice, Interval, Letter, Order, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PmInterval {
    pub interval: Interval,
    pub period: usize,
    pub left_open: bool,
    pub right_open: bool,
    /// `w[j+1]` for a right-closed interval `[i..j]`.
    pub breaking_letter: Option<Letter>,
    pub is_run: bool,
}

impl PmInterval {
    /// Builds the flags for `[start..end]` (0-based, inclusive) of `s`.
    pub(crate) fn from_offsets(s: &[u8], start: usize, end: usize, period: usize) -> PmInterval {
        let right_open = end + 1 == s.len();
        PmInterval {
            interval: Interval::new(start + 1, end + 1),
            period,
            left_open: start == 0,
            right_open,
            breaking_letter: (!right_open).then(|| Letter::from_bit(s[end + 1])),
            is_run: end + 1 - start >= 2 * period,
        }
    }

    pub fn start(&self) -> usize {
        self.interval.start
    }

    pub fn end(&self) -> usize {
        self.interval.end
    }

    pub fn is_closed(&self) -> bool {
        !self.left_open && !self.right_open
    }
}

/// The orders under which a root is a Lyndon word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OrderTags {
    pub zero_first: bool,
    pub one_first: bool,
}

impl OrderTags {
    pub const BOTH: OrderTags = OrderTags { zero_first: true, one_first: true };

    pub fn only(order: Order) -> OrderTags {
        match order {
            Order::ZeroFirst => OrderTags { zero_first: true, one_first: false },
            Order::OneFirst => OrderTags { zero_first: false, one_first: true },
        }
    }

    pub fn contains(&self, order: Order) -> bool {
        match order {
            Order::ZeroFirst => self.zero_first,
            Order::OneFirst => self.one_first,
        }
    }
}

impl Serialize for OrderTags {
    /// The smaller letters of the tagged orders, e.g. `[0, 1]`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let letters: Vec<u8> = Order::BOTH
            .iter()
            .filter(|o| self.contains(**o))
            .map(|o| o.smaller().bit())
            .collect();
        letters.serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LyndonRoot {
    pub interval: Interval,
    pub orders: OrderTags,
}

/// `Lroots(s)` together with `B(s)`, `B_0(s)` and `B_1(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LyndonRootSet {
    pub owner: PmInterval,
    pub roots: Vec<LyndonRoot>,
    pub b: BTreeSet<usize>,
    pub b0: BTreeSet<usize>,
    pub b1: BTreeSet<usize>,
}

impl LyndonRootSet {
    pub fn new(owner: PmInterval) -> LyndonRootSet {
        LyndonRootSet {
            owner,
            roots: Vec::new(),
            b: BTreeSet::new(),
            b0: BTreeSet::new(),
            b1: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, root: LyndonRoot) {
        let k = root.interval.start;
        self.b.insert(k);
        if root.orders.zero_first {
            self.b0.insert(k);
        }
        if root.orders.one_first {
            self.b1.insert(k);
        }
        if let Err(at) = self.roots.binary_search(&root) {
            self.roots.insert(at, root);
        }
    }

    /// `B_a(s)` for the order favoring `a`.
    pub fn b_for(&self, a: Letter) -> &BTreeSet<usize> {
        match a {
            Letter::Zero => &self.b0,
            Letter::One => &self.b1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OwnedPosition {
    pub owner: PmInterval,
    pub root: LyndonRoot,
}

impl OwnedPosition {
    fn from_raw(s: &[u8], o: &Owned) -> OwnedPosition {
        let orders = if o.period == 1 {
            OrderTags::BOTH
        } else {
            OrderTags::only(Order::favoring(Letter::from_bit(o.letter)))
        };
        OwnedPosition {
            owner: PmInterval::from_offsets(s, o.start, o.end, o.period),
            root: LyndonRoot {
                interval: Interval::new(o.pos + 1, o.pos + o.period),
                orders,
            },
        }
    }
}

/// For each position `1..=|w|`, the interval whose root set contains it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ownership {
    pub entries: Vec<Option<OwnedPosition>>,
}

impl Ownership {
    /// Entry for 1-based position `k`.
    pub fn get(&self, k: usize) -> Option<&OwnedPosition> {
        k.checked_sub(1).and_then(|i| self.entries.get(i)).and_then(Option::as_ref)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdleReport {
    pub runs: Vec<PmInterval>,
    pub charged: BTreeSet<usize>,
    /// Idle positions `p_1 < ... < p_ℓ`.
    pub idle: Vec<usize>,
    pub d: BTreeSet<usize>,
    pub d_prime: BTreeSet<usize>,
}

/// The unique maximal interval containing `seed` whose content has the same
/// smallest period as `w[seed]`.
pub fn period_maximal_extension(w: &Word, seed: Interval) -> Result<PmInterval> {
    seed.validate(w.len())?;
    let s = w.to_bits();
    let (a, b) = (seed.start - 1, seed.end - 1);
    let period = smallest_period_slice(&s[a..=b]);
    let (start, end) = extend(&s, a, b, period);
    debug_assert_eq!(smallest_period_slice(&s[start..=end]), period);
    Ok(PmInterval::from_offsets(&s, start, end, period))
}

/// The interval `s` with `k ∈ B(s)`, with the root starting at `k`.
pub fn owner_of(w: &Word, k: usize) -> Result<Option<OwnedPosition>> {
    if k == 0 || k > w.len() {
        return Err(Error::PositionOutOfRange { pos: k, len: w.len() });
    }
    let s = w.to_bits();
    let tail = last_block_start(&s);
    Ok(owner_at(&s, k - 1, tail).map(|o| OwnedPosition::from_raw(&s, &o)))
}

pub fn ownership(w: &Word) -> Ownership {
    let s = w.to_bits();
    let mut entries = vec![None; s.len()];
    let mut kernel = Kernel::new();
    for o in kernel.ownership(&s) {
        entries[o.pos] = Some(OwnedPosition::from_raw(&s, o));
    }
    Ownership { entries }
}

/// Every period-maximal interval with a nonempty root set, keyed by its
/// interval.
pub fn all_intervals_with_roots(w: &Word) -> BTreeMap<Interval, LyndonRootSet> {
    let s = w.to_bits();
    let mut kernel = Kernel::new();
    let mut map: BTreeMap<Interval, LyndonRootSet> = BTreeMap::new();
    for o in kernel.ownership(&s) {
        let owned = OwnedPosition::from_raw(&s, o);
        map.entry(owned.owner.interval)
            .or_insert_with(|| LyndonRootSet::new(owned.owner))
            .insert(owned.root);
    }
    map
}

/// All runs of `w`, sorted by start (then end).
///
/// Every run owns at least one root, so the runs are exactly the run owners.
pub fn runs(w: &Word) -> Vec<PmInterval> {
    all_intervals_with_roots(w)
        .into_values()
        .map(|set| set.owner)
        .filter(|s| s.is_run)
        .collect()
}

pub fn compute_d(w: &Word) -> BTreeSet<usize> {
    let mut out = Vec::new();
    Kernel::new().d_positions(&w.to_bits(), &mut out);
    out.into_iter().collect()
}

pub fn compute_d_prime(w: &Word) -> BTreeSet<usize> {
    let mut out = Vec::new();
    Kernel::new().d_prime_positions(&w.to_bits(), &mut out);
    out.into_iter().collect()
}

pub fn idle_report(w: &Word) -> IdleReport {
    let sets = all_intervals_with_roots(w);
    let mut runs = Vec::new();
    let mut charged = BTreeSet::new();
    for set in sets.values().filter(|set| set.owner.is_run) {
        runs.push(set.owner);
        if let Some(&k) = set.b.last() {
            charged.insert(k);
        }
    }
    let idle = (1..=w.len()).filter(|k| !charged.contains(k)).collect();
    IdleReport {
        runs,
        charged,
        idle,
        d: compute_d(w),
        d_prime: compute_d_prime(w),
    }
}
