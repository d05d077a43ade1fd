//! Slice-level ownership computation shared by the public analysis API and
//! the search. Offsets here are 0-based; intervals are inclusive.

use crate::word::longest_lyndon_prefix_slice;

/// Position `pos` lies in `B(s)` for the period-maximal interval
/// `s = [start..end]` with the given period; its Lyndon root is
/// `[pos..pos + period - 1]`, Lyndon under the order favoring `letter`
/// (under both orders when `period == 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Owned {
    pub start: usize,
    pub end: usize,
    pub period: usize,
    pub pos: usize,
    pub letter: u8,
}

impl Owned {
    pub fn key(&self) -> (usize, usize) {
        (self.start, self.end)
    }

    pub fn is_run(&self) -> bool {
        self.end + 1 - self.start >= 2 * self.period
    }
}

/// Grows `[start..end]` in both directions while `period` stays a period.
pub(crate) fn extend(s: &[u8], mut start: usize, mut end: usize, period: usize) -> (usize, usize) {
    while start > 0 && s[start - 1] == s[start - 1 + period] {
        start -= 1;
    }
    while end + 1 < s.len() && s[end + 1] == s[end + 1 - period] {
        end += 1;
    }
    (start, end)
}

/// Offset of the first letter of the final block of equal letters.
pub(crate) fn last_block_start(s: &[u8]) -> usize {
    match s.last() {
        None => 0,
        Some(&a) => s.iter().rposition(|&x| x != a).map_or(0, |i| i + 1),
    }
}

/// The owner of offset `k`, if any.
pub(crate) fn owner_at(s: &[u8], k: usize, tail: usize) -> Option<Owned> {
    if k == 0 {
        return None;
    }
    let a = s[k];
    if s[k - 1] == a {
        let (start, end) = extend(s, k, k, 1);
        return Some(Owned { start, end, period: 1, pos: k, letter: a });
    }
    if k == tail {
        // w[k-1..] = ā a⁺
        return None;
    }
    let period = longest_lyndon_prefix_slice(&s[k..], a);
    let (start, end) = extend(s, k, k + period - 1, period);
    Some(Owned { start, end, period, pos: k, letter: a })
}

/// Reusable buffers for per-word ownership computations.
#[derive(Debug, Default)]
pub struct Kernel {
    owned: Vec<Owned>,
    block_start: Vec<usize>,
}

impl Kernel {
    pub fn new() -> Kernel {
        Kernel::default()
    }

    /// Every owned position, grouped by owner: sorted by `(start, end, pos)`.
    pub(crate) fn ownership(&mut self, s: &[u8]) -> &[Owned] {
        self.owned.clear();
        let n = s.len();
        if n < 2 {
            return &self.owned;
        }
        // Period-1 owners come from block boundaries; avoid rescanning blocks.
        self.block_start.clear();
        self.block_start.resize(n, 0);
        for k in 1..n {
            self.block_start[k] = if s[k] == s[k - 1] { self.block_start[k - 1] } else { k };
        }
        let tail = self.block_start[n - 1];
        let mut block_end = n - 1;
        for k in (1..n).rev() {
            if k + 1 < n && s[k + 1] != s[k] {
                block_end = k;
            }
            if s[k] == s[k - 1] {
                self.owned.push(Owned {
                    start: self.block_start[k],
                    end: block_end,
                    period: 1,
                    pos: k,
                    letter: s[k],
                });
            } else if let Some(o) = owner_at(s, k, tail) {
                self.owned.push(o);
            }
        }
        self.owned.sort_unstable_by_key(|o| (o.start, o.end, o.pos));
        &self.owned
    }

    /// 1-based positions of `D(w)`, ascending, written to `out`.
    pub fn d_positions(&mut self, s: &[u8], out: &mut Vec<usize>) {
        out.clear();
        let n = s.len();
        let owned = self.ownership(s);
        for group in owned.chunk_by(|x, y| x.key() == y.key()) {
            let o = group[0];
            let right_open = o.end + 1 == n;
            let closed = o.start > 0 && !right_open;
            if !o.is_run() {
                if closed {
                    out.extend(group.iter().map(|g| g.pos + 1));
                }
                continue;
            }
            if o.period == 1 || !right_open {
                debug_assert!(right_open || o.period == 1 || group.iter().all(|g| g.letter == s[o.end + 1]));
                out.extend(group[..group.len() - 1].iter().map(|g| g.pos + 1));
                continue;
            }
            // Right-open run with period >= 2: keep the Lyndon class whose
            // first root starts later.
            let first_letter = group[0].letter;
            let chosen = 1 - first_letter;
            let mut members = group.iter().filter(|g| g.letter == chosen).peekable();
            let mut last = None;
            while let Some(g) = members.next() {
                if members.peek().is_some() {
                    out.push(g.pos + 1);
                }
                last = Some(g.pos);
            }
            debug_assert!(last.is_some());
        }
        out.sort_unstable();
    }

    /// 1-based positions of `D′(w)`, ascending, written to `out`.
    pub fn d_prime_positions(&mut self, s: &[u8], out: &mut Vec<usize>) {
        out.clear();
        let n = s.len();
        if n < 2 {
            return;
        }
        let tail = last_block_start(s);
        let owned = self.ownership(s);
        for group in owned.chunk_by(|x, y| x.key() == y.key()) {
            let o = group[0];
            out.extend(group[..group.len() - 1].iter().map(|g| g.pos + 1));
            if o.start > 0 && !o.is_run() {
                out.push(group[group.len() - 1].pos + 1);
            }
        }
        if tail > 0 {
            out.push(tail + 1);
        }
        out.sort_unstable();
    }

    /// Number of runs (equivalently, of charged positions).
    pub fn run_count(&mut self, s: &[u8]) -> usize {
        let owned = self.ownership(s);
        owned
            .chunk_by(|x, y| x.key() == y.key())
            .filter(|g| g[0].is_run())
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn d_on_example_word() {
        let mut k = Kernel::new();
        let mut out = Vec::new();
        k.d_positions(&bits("1110101101"), &mut out);
        assert_eq!(out, vec![2]);
        k.d_prime_positions(&bits("1110101101"), &mut out);
        assert_eq!(out, vec![2, 4, 6, 9, 10]);
        k.d_prime_positions(&bits("01"), &mut out);
        assert_eq!(out, vec![2]);
        k.d_positions(&bits("00"), &mut out);
        assert!(out.is_empty());
        k.d_positions(&[], &mut out);
        assert!(out.is_empty());
    }

    #[test]
    fn last_block() {
        assert_eq!(last_block_start(&bits("0011")), 2);
        assert_eq!(last_block_start(&bits("111")), 0);
        assert_eq!(last_block_start(&bits("")), 0);
    }
}
