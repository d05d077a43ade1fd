//! Binary words, the two lexicographic orders, periods and Lyndon words.
//!
//! Positions in the public API are 1-based and intervals are inclusive,
//! so `[i..j]` covers `w[i], ..., w[j]`. Internally the hot paths work on
//! unpacked `&[u8]` slices of 0/1 values with 0-based offsets; the
//! `*_slice` helpers in this module are those kernels.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BLOCK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Letter {
    Zero = 0,
    One = 1,
}

impl Letter {
    /// The other letter, written `ā = 1 − a`.
    pub fn flip(self) -> Letter {
        match self {
            Letter::Zero => Letter::One,
            Letter::One => Letter::Zero,
        }
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn from_bit(bit: u8) -> Letter {
        if bit & 1 == 0 {
            Letter::Zero
        } else {
            Letter::One
        }
    }
}

impl From<Letter> for u8 {
    fn from(a: Letter) -> u8 {
        a.bit()
    }
}

impl TryFrom<u8> for Letter {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, Self::Error> {
        match v {
            0 => Ok(Letter::Zero),
            1 => Ok(Letter::One),
            _ => Err(format!("letter must be 0 or 1, got {v}")),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// One of the two lexicographic orders on `{0,1}`, named by its smaller letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    /// `0 ≺ 1`
    ZeroFirst,
    /// `1 ≺ 0`
    OneFirst,
}

impl Order {
    pub const BOTH: [Order; 2] = [Order::ZeroFirst, Order::OneFirst];

    /// The order in which `a` is the smaller letter.
    pub fn favoring(a: Letter) -> Order {
        match a {
            Letter::Zero => Order::ZeroFirst,
            Letter::One => Order::OneFirst,
        }
    }

    pub fn smaller(self) -> Letter {
        match self {
            Order::ZeroFirst => Letter::Zero,
            Order::OneFirst => Letter::One,
        }
    }

    pub fn reversed(self) -> Order {
        Order::favoring(self.smaller().flip())
    }
}

/// Inclusive interval `[start..end]` of 1-based positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Interval {
        Interval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.start <= pos && pos <= self.end
    }

    /// Checks `1 <= start <= end <= len`.
    pub fn validate(&self, len: usize) -> Result<()> {
        if self.start >= 1 && self.start <= self.end && self.end <= len {
            Ok(())
        } else {
            Err(Error::InvalidInterval {
                start: self.start,
                end: self.end,
                len,
            })
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]", self.start, self.end)
    }
}

/// A finite binary word, bit-packed.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    blocks: Vec<u64>,
    len: usize,
}

impl Word {
    pub fn new() -> Word {
        Word::default()
    }

    /// Builds a word from 0/1 values. Any nonzero value is read as 1.
    pub fn from_bits(bits: &[u8]) -> Word {
        let mut w = Word {
            blocks: Vec::with_capacity(bits.len().div_ceil(BLOCK)),
            len: 0,
        };
        for &b in bits {
            w.push(Letter::from_bit((b != 0) as u8));
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, a: Letter) {
        let (block, bit) = (self.len / BLOCK, self.len % BLOCK);
        if bit == 0 {
            self.blocks.push(0);
        }
        if a == Letter::One {
            self.blocks[block] |= 1 << bit;
        }
        self.len += 1;
    }

    /// Letter at 1-based position `pos`.
    pub fn get(&self, pos: usize) -> Result<Letter> {
        if pos == 0 || pos > self.len {
            return Err(Error::PositionOutOfRange { pos, len: self.len });
        }
        Ok(self.letter_at(pos - 1))
    }

    fn letter_at(&self, offset: usize) -> Letter {
        Letter::from_bit((self.blocks[offset / BLOCK] >> (offset % BLOCK)) as u8 & 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len).map(|i| self.letter_at(i))
    }

    /// Unpacked 0/1 values, 0-based.
    pub fn to_bits(&self) -> Vec<u8> {
        self.letters().map(Letter::bit).collect()
    }

    /// The factor `w[i..j]`.
    pub fn factor(&self, interval: Interval) -> Result<Word> {
        interval.validate(self.len)?;
        Ok((interval.start - 1..interval.end)
            .map(|i| self.letter_at(i))
            .collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        self.letters().chain(other.letters()).collect()
    }

    /// Every letter flipped.
    pub fn complement(&self) -> Word {
        let mut blocks: Vec<u64> = self.blocks.iter().map(|b| !b).collect();
        let tail = self.len % BLOCK;
        if tail != 0 {
            if let Some(last) = blocks.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Word {
            blocks,
            len: self.len,
        }
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        let mut w = Word::new();
        for a in iter {
            w.push(a);
        }
        w
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .enumerate()
            .map(|(offset, ch)| match ch {
                '0' => Ok(Letter::Zero),
                '1' => Ok(Letter::One),
                _ => Err(Error::InvalidLetter { ch, offset }),
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.letters() {
            f.write_str(if a == Letter::One { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The smallest period of `u`.
pub fn smallest_period(u: &Word) -> Result<usize> {
    if u.is_empty() {
        return Err(Error::EmptyWord("smallest_period"));
    }
    Ok(smallest_period_slice(&u.to_bits()))
}

/// Lexicographic comparison under `order`; a proper prefix is smaller.
pub fn compare(u: &Word, v: &Word, order: Order) -> Ordering {
    compare_slice(&u.to_bits(), &v.to_bits(), order.smaller().bit())
}

/// Whether `u` is strictly smaller under `order` than each of its nonempty
/// proper suffixes.
pub fn is_lyndon(u: &Word, order: Order) -> Result<bool> {
    if u.is_empty() {
        return Err(Error::EmptyWord("is_lyndon"));
    }
    let bits = u.to_bits();
    Ok(longest_lyndon_prefix_slice(&bits, order.smaller().bit()) == bits.len())
}

/// The largest `k'` such that `w[k..k']` is a Lyndon word under `order`.
pub fn longest_lyndon_start(w: &Word, k: usize, order: Order) -> Result<usize> {
    if k == 0 || k > w.len() {
        return Err(Error::PositionOutOfRange { pos: k, len: w.len() });
    }
    let bits = w.to_bits();
    Ok(k - 1 + longest_lyndon_prefix_slice(&bits[k - 1..], order.smaller().bit()))
}

pub fn complement(w: &Word) -> Word {
    w.complement()
}

/// Smallest period of a nonempty slice, from its border (failure) table.
pub fn smallest_period_slice(s: &[u8]) -> usize {
    debug_assert!(!s.is_empty());
    let mut fail = vec![0usize; s.len()];
    let mut b = 0;
    for i in 1..s.len() {
        while b > 0 && s[i] != s[b] {
            b = fail[b - 1];
        }
        if s[i] == s[b] {
            b += 1;
        }
        fail[i] = b;
    }
    s.len() - fail[s.len() - 1]
}

pub fn compare_slice(u: &[u8], v: &[u8], smaller: u8) -> Ordering {
    for (&x, &y) in u.iter().zip(v) {
        if x != y {
            return (x ^ smaller).cmp(&(y ^ smaller));
        }
    }
    u.len().cmp(&v.len())
}

/// Length of the longest Lyndon prefix of `s` under the order whose smaller
/// letter is `smaller`. This is the first factor of the Lyndon factorization,
/// found by one pass of Duval's algorithm.
pub fn longest_lyndon_prefix_slice(s: &[u8], smaller: u8) -> usize {
    if s.is_empty() {
        return 0;
    }
    let mut probe = 0;
    let mut j = 1;
    while j < s.len() {
        let (x, y) = (s[probe] ^ smaller, s[j] ^ smaller);
        if x < y {
            probe = 0;
        } else if x == y {
            probe += 1;
        } else {
            break;
        }
        j += 1;
    }
    j - probe
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn naive_period(s: &[u8]) -> usize {
        (1..=s.len())
            .find(|&p| (0..s.len() - p).all(|i| s[i] == s[i + p]))
            .unwrap()
    }

    fn naive_lyndon(s: &[u8], smaller: u8) -> bool {
        (1..s.len()).all(|i| compare_slice(s, &s[i..], smaller) == Ordering::Less)
    }

    fn all_words(len: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u32..1 << len).map(move |x| (0..len).map(|i| (x >> i) as u8 & 1).collect())
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(w("0110").to_string(), "0110");
        assert_eq!(w("").len(), 0);
        assert!(matches!(
            "01x".parse::<Word>(),
            Err(Error::InvalidLetter { ch: 'x', offset: 2 })
        ));
        let long: String = (0..150).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
        assert_eq!(w(&long).to_string(), long);
    }

    #[test]
    fn period_examples() {
        assert_eq!(smallest_period(&w("10101")).unwrap(), 2);
        assert_eq!(smallest_period(&w("0")).unwrap(), 1);
        assert_eq!(smallest_period(&w("0110")).unwrap(), 3);
        assert!(matches!(smallest_period(&w("")), Err(Error::EmptyWord(_))));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&w("01"), &w("0101"), Order::ZeroFirst), Ordering::Less);
        assert_eq!(compare(&w("10"), &w("01"), Order::OneFirst), Ordering::Less);
        assert_eq!(compare(&w("0"), &w("0"), Order::ZeroFirst), Ordering::Equal);
        assert_eq!(compare(&w(""), &w(""), Order::OneFirst), Ordering::Equal);
    }

    #[test]
    fn lyndon_examples() {
        assert!(is_lyndon(&w("011"), Order::ZeroFirst).unwrap());
        assert!(is_lyndon(&w("110"), Order::OneFirst).unwrap());
        assert!(!is_lyndon(&w("0101"), Order::ZeroFirst).unwrap());
        assert!(is_lyndon(&w(""), Order::ZeroFirst).is_err());
    }

    #[test]
    fn longest_lyndon_examples() {
        assert_eq!(longest_lyndon_start(&w("1110101101"), 6, Order::ZeroFirst).unwrap(), 8);
        assert_eq!(longest_lyndon_start(&w("1101011"), 2, Order::OneFirst).unwrap(), 3);
        assert_eq!(longest_lyndon_start(&w("111"), 2, Order::OneFirst).unwrap(), 2);
        assert!(longest_lyndon_start(&w("111"), 4, Order::OneFirst).is_err());
        assert!(longest_lyndon_start(&w("111"), 0, Order::OneFirst).is_err());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&w("0")), w("1"));
        assert_eq!(complement(&w("1110101101")), w("0001010010"));
        assert_eq!(complement(&w("")), w(""));
        let long = w(&"01".repeat(40));
        assert_eq!(complement(&long).to_string(), "10".repeat(40));
    }

    #[test]
    fn period_matches_scan_exhaustively() {
        for len in 1..=14 {
            for s in all_words(len) {
                assert_eq!(smallest_period_slice(&s), naive_period(&s), "{s:?}");
            }
        }
    }

    #[test]
    fn lyndon_words_are_unbordered_and_order_exclusive() {
        for len in 1..=14 {
            for s in all_words(len) {
                let lyn: Vec<bool> = [0u8, 1].iter().map(|&a| naive_lyndon(&s, a)).collect();
                for (a, &is) in lyn.iter().enumerate() {
                    let word = Word::from_bits(&s);
                    assert_eq!(is_lyndon(&word, Order::favoring(Letter::from_bit(a as u8))).unwrap(), is);
                    if is {
                        assert_eq!(naive_period(&s), s.len());
                    }
                }
                if len >= 2 && s.contains(&0) && s.contains(&1) {
                    assert!(!(lyn[0] && lyn[1]));
                }
                if len == 1 {
                    assert!(lyn[0] && lyn[1]);
                }
            }
        }
    }

    #[test]
    fn longest_lyndon_matches_prefix_scan() {
        for len in 1..=12 {
            for s in all_words(len) {
                for k in 0..len {
                    for a in [0u8, 1] {
                        let expect = (k + 1..=len).filter(|&e| naive_lyndon(&s[k..e], a)).max().unwrap() - k;
                        assert_eq!(longest_lyndon_prefix_slice(&s[k..], a), expect, "{s:?} {k} {a}");
                    }
                }
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = Word> {
            proptest::collection::vec(0u8..2, 0..40).prop_map(|b| Word::from_bits(&b))
        }

        proptest! {
            #[test]
            fn complement_swaps_orders(u in word(), v in word()) {
                prop_assert_eq!(
                    compare(&u, &v, Order::ZeroFirst),
                    compare(&u.complement(), &v.complement(), Order::OneFirst)
                );
            }

            #[test]
            fn compare_is_antisymmetric(u in word(), v in word()) {
                for o in Order::BOTH {
                    prop_assert_eq!(compare(&u, &v, o), compare(&v, &u, o).reverse());
                    prop_assert_eq!(compare(&u, &v, o) == Ordering::Equal, u == v);
                }
            }

            #[test]
            fn compare_is_transitive(u in word(), v in word(), x in word()) {
                for o in Order::BOTH {
                    let mut xs = [&u, &v, &x];
                    xs.sort_by(|a, b| compare(a, b, o));
                    prop_assert_ne!(compare(xs[0], xs[2], o), Ordering::Greater);
                }
            }

            #[test]
            fn bits_roundtrip(u in word()) {
                prop_assert_eq!(Word::from_bits(&u.to_bits()), u.clone());
                prop_assert_eq!(u.to_string().parse::<Word>().unwrap(), u);
            }
        }
    }
}
