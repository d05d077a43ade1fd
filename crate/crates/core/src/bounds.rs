//! Density bounds from the thresholds `m_d`, and brute-force maximal run
//! counts.
//!
//! The arithmetic is generic over the scalar type so the same code runs on
//! exact rationals (the default, see [`crate::Rational`]) or on floats for
//! quick display. Certification always uses rationals.

use std::fmt::{self, Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Kernel;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::search::KnownTable;
use crate::word::Word;
use crate::Rational;

/// Third column of the reference table: the bound for `d = 1..=20`, truncated.
pub const PRINTED_BOUNDS: [&str; 20] = [
    "0.98360655737…",
    "0.97872340425…",
    "0.97580645161…",
    "0.97297297297…",
    "0.97058823529…",
    "0.96875",
    "0.96728971962…",
    "0.96595744680…",
    "0.96484375",
    "0.96323529411…",
    "0.96245733788…",
    "0.96153846153…",
    "0.96060606060…",
    "0.95988538681…",
    "0.95912806539…",
    "0.95854922279…",
    "0.95802469135…",
    "0.95744680851…",
    "0.95701357466…",
    "0.95652173913…",
];

/// Numeric types the bound arithmetic runs on.
pub trait Scalar: Num + PartialOrd + FromPrimitive + Clone + Debug {
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits the scalar type")
    }

    fn ratio(num: usize, den: usize) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }
}

impl<T: Num + PartialOrd + FromPrimitive + Clone + Debug> Scalar for T {}

/// `(m - 2 - d) / (m - 2)`: the limiting density of runs when every word of
/// length `m` has `|D(w)| >= d`.
pub fn limit_upper_bound<T: Scalar>(d: usize, m: usize) -> Result<T> {
    if m < d + 3 {
        return Err(Error::DegenerateBound { d, m });
    }
    Ok(T::ratio(m - 2 - d, m - 2))
}

/// Decimal expansion of a nonnegative rational, truncated after `digits`
/// fractional digits.
pub fn truncated_decimal<I>(r: &Ratio<I>, digits: usize) -> String
where
    I: Integer + Signed + Clone + Display + FromPrimitive,
{
    let ten = I::from_u8(10).expect("10 fits");
    let (int, mut rem) = r.numer().div_rem(r.denom());
    let mut out = format!("{int}.");
    for _ in 0..digits {
        rem = rem * ten.clone();
        let (digit, next) = rem.div_rem(r.denom());
        out.push_str(&digit.to_string());
        rem = next;
    }
    out
}

/// Whether `r` agrees with a printed decimal: every printed digit when the
/// text ends in an ellipsis (truncation), exact equality otherwise.
pub fn matches_printed<I>(r: &Ratio<I>, printed: &str) -> bool
where
    I: Integer + Signed + Clone + Display + FromPrimitive,
{
    let (digits, truncated) = match printed.strip_suffix('…').or_else(|| printed.strip_suffix("...")) {
        Some(d) => (d, true),
        None => (printed, false),
    };
    let Some((_, frac)) = digits.split_once('.') else {
        return false;
    };
    if truncated_decimal(r, frac.len()) != digits {
        return false;
    }
    if truncated {
        return true;
    }
    let scale = (0..frac.len()).fold(I::one(), |acc, _| acc * I::from_u8(10).expect("10 fits"));
    (r.clone() * Ratio::from_integer(scale)).is_integer()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inequality<T> {
    pub label: String,
    pub lhs: T,
    pub rhs: T,
    /// `lhs < rhs`
    pub holds: bool,
}

impl<T: Scalar> Inequality<T> {
    fn strict(label: String, lhs: T, rhs: T) -> Inequality<T> {
        let holds = lhs < rhs;
        Inequality { label, lhs, rhs, holds }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCertificate<T> {
    pub d: usize,
    pub table: KnownTable,
    pub tail_len: usize,
    pub tail_floor: usize,
    pub bound: T,
    pub checks: Vec<Inequality<T>>,
}

impl<T> BoundCertificate<T> {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

impl BoundCertificate<Rational> {
    /// JSON with every rational written as a `[numerator, denominator]` pair.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

impl<T: Display> Display for BoundCertificate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d = {}, tail {} with floor {}, bound {}", self.d, self.tail_len, self.tail_floor, self.bound)?;
        for c in &self.checks {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            writeln!(f, "  {mark} {}: {} < {}", c.label, c.lhs, c.rhs)?;
        }
        Ok(())
    }
}

/// Checks that the density of runs is below `(m_d - 2 - d)/(m_d - 2)` for
/// every finite word, not just in the limit.
///
/// Split a word at its idle positions into blocks of `d` idle positions each;
/// full blocks are shorter than `m_d - 1`. The last block `z` is handled
/// here. Short tails `|z| <= t` are fine when `t < (m_d - 2)/d`. Longer ones
/// split as `z = z₁z₂` with `|z₂| = t`: `z₂` contributes at least `c` idle
/// positions (given `|D′(w)| >= c` for all words of length `t + 1`), and
/// `m_i - 1 <= |z₁| < m_{i+1} - 1` contributes `i` more, which leaves
/// `((m_{i+1} - 2 + t) - i - c - 1)/(m_{i+1} - 2 + t)` as the worst density
/// for each `i < d` (with `m_0 = 0`).
pub fn check_finite_bound<T: Scalar>(
    d: usize,
    table: &KnownTable,
    tail_len: usize,
    tail_floor: usize,
) -> Result<(bool, BoundCertificate<T>)> {
    let m = |i: usize| -> Result<usize> {
        if i == 0 {
            Ok(0)
        } else {
            table.get(i).ok_or(Error::MissingTableEntry(i))
        }
    };
    if d == 0 {
        return Err(Error::Config("d must be at least 1".into()));
    }
    let m_d = m(d)?;
    let bound: T = limit_upper_bound(d, m_d)?;
    let mut checks = Vec::with_capacity(d + 2);

    checks.push(Inequality::strict(
        format!("short tail: t < (m_{d} - 2)/{d}"),
        T::from_count(tail_len),
        T::ratio(m_d - 2, d),
    ));
    if tail_len >= 1 {
        checks.push(Inequality::strict(
            format!("short tail: (|z| - 1)/|z| at |z| = {tail_len}"),
            T::ratio(tail_len - 1, tail_len),
            bound.clone(),
        ));
    }
    for i in 0..d {
        let (lo, hi) = (m(i)?, m(i + 1)?);
        let len = (hi + tail_len).checked_sub(2).filter(|&x| x > 0).ok_or_else(|| {
            Error::Config(format!("tail length {} for i = {i} is not positive", hi + tail_len))
        })?;
        let worst = T::from_count(len) - T::from_count(i + tail_floor + 1);
        checks.push(Inequality::strict(
            format!("long tail i = {i}: m_{i} - 1 = {} <= |z1| < m_{} - 1 = {}", lo as isize - 1, i + 1, hi - 1),
            worst / T::from_count(len),
            bound.clone(),
        ));
    }
    let cert = BoundCertificate {
        d,
        table: (1..=d).map(|i| (i, table.get(i).unwrap_or_default())).collect(),
        tail_len,
        tail_floor,
        bound,
        checks,
    };
    Ok((cert.holds(), cert))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoResult {
    pub n: usize,
    pub max_runs: usize,
    /// Maximizing words starting with `0`, in lexicographic order.
    pub witnesses: Vec<Word>,
}

/// `ρ(n, 2)` by enumerating all words of length `n` that start with `0`.
pub fn rho_brute(n: usize, budget: Budget) -> Result<RhoResult> {
    budget.check(n)?;
    if n == 0 {
        return Ok(RhoResult { n, max_runs: 0, witnesses: vec![Word::new()] });
    }
    let decode = |x: u64| -> Vec<u8> { (0..n).map(|i| (x >> (n - 1 - i)) as u8 & 1).collect() };
    let counts: Vec<(usize, u64)> = (0..1u64 << (n - 1))
        .into_par_iter()
        .map_init(Kernel::new, |kernel, x| (kernel.run_count(&decode(x)), x))
        .collect();
    let max_runs = counts.iter().map(|&(c, _)| c).max().unwrap_or(0);
    let witnesses = counts
        .iter()
        .filter(|&&(c, _)| c == max_runs)
        .map(|&(_, x)| Word::from_bits(&decode(x)))
        .collect();
    Ok(RhoResult { n, max_runs, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn limit_bound_examples() {
        assert_eq!(limit_upper_bound::<Rational>(1, 63).unwrap(), r(60, 61));
        assert_eq!(limit_upper_bound::<Rational>(20, 462).unwrap(), r(22, 23));
        for d in 1..10 {
            assert_eq!(limit_upper_bound::<Rational>(d, d + 3).unwrap(), r(1, d as i64 + 1));
        }
        assert!(matches!(limit_upper_bound::<Rational>(3, 5), Err(Error::DegenerateBound { d: 3, m: 5 })));
        let f: f64 = limit_upper_bound(1, 63).unwrap();
        assert!((f - 60.0 / 61.0).abs() < 1e-15);
    }

    #[test]
    fn decimals() {
        assert_eq!(truncated_decimal(&r(60, 61), 11), "0.98360655737");
        assert_eq!(truncated_decimal(&r(2, 3), 3), "0.666");
        assert!(matches_printed(&r(31, 32), "0.96875"));
        assert!(!matches_printed(&r(2, 3), "0.666"));
        assert!(matches_printed(&r(2, 3), "0.666…"));
        assert!(!matches_printed(&r(2, 3), "0.667…"));
        assert!(!matches_printed(&r(2, 3), "nonsense"));
    }

    #[test]
    fn finite_bound_single_row() {
        let table: KnownTable = [(1, 63)].into_iter().collect();
        let (ok, cert) = check_finite_bound::<Rational>(1, &table, 12, 3).unwrap();
        assert!(ok);
        assert_eq!(cert.bound, r(60, 61));
        let last = cert.checks.last().unwrap();
        assert_eq!((last.lhs, last.rhs), (r(69, 73), r(60, 61)));

        let (ok, cert) = check_finite_bound::<Rational>(1, &table, 12, 0).unwrap();
        assert!(!ok);
        assert_eq!(cert.checks.last().unwrap().lhs, r(72, 73));

        assert!(matches!(
            check_finite_bound::<Rational>(2, &table, 12, 3),
            Err(Error::MissingTableEntry(2))
        ));
    }

    #[test]
    fn certificate_json_uses_pairs() {
        let table: KnownTable = [(1, 63)].into_iter().collect();
        let (_, cert) = check_finite_bound::<Rational>(1, &table, 12, 3).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(v["bound"], serde_json::json!([60, 61]));
        assert_eq!(v["table"], serde_json::json!({"1": 63}));
    }

    #[test]
    fn rho_small() {
        assert_eq!(rho_brute(1, Budget::default()).unwrap().max_runs, 0);
        let two = rho_brute(2, Budget::default()).unwrap();
        assert_eq!(two.max_runs, 1);
        assert_eq!(two.witnesses, vec!["00".parse::<Word>().unwrap()]);
        assert!(rho_brute(40, Budget::default()).is_err());
    }
}
