use runslab::bounds::{check_finite_bound, rho_brute};
use runslab::oracle;
use runslab::search::KnownTable;
use runslab::{Budget, Rational, Word};

fn words(n: usize) -> impl Iterator<Item = Word> {
    (0u64..1 << n).map(move |x| Word::from_bits(&(0..n).map(|i| (x >> (n - 1 - i)) as u8 & 1).collect::<Vec<_>>()))
}

#[test]
fn rho_5_matches_enumeration() {
    let r = rho_brute(5, Budget::default()).unwrap();
    let naive_max = words(5).map(|w| oracle::naive_runs(&w).len()).max().unwrap();
    assert_eq!(r.max_runs, naive_max);
    assert_eq!(r.max_runs, 2);
    let expected: Vec<Word> = ["00011", "00100", "00101", "00110", "00111", "01011", "01100"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(r.witnesses, expected);
}

#[test]
fn run_counts_agree_with_oracle() {
    for n in 1..=14 {
        let r = rho_brute(n, Budget::default()).unwrap();
        let naive_max = words(n).map(|w| oracle::naive_runs(&w).len()).max().unwrap();
        assert_eq!(r.max_runs, naive_max, "n = {n}");
        for w in &r.witnesses {
            assert_eq!(runslab::analysis::idle_report(w).charged.len(), r.max_runs);
        }
    }
}

#[test]
fn rho_stays_below_22_23() {
    let mut prev = 0;
    for n in 1..=16 {
        let r = rho_brute(n, Budget::default()).unwrap();
        assert!(Rational::new(r.max_runs as i64, n as i64) < Rational::new(22, 23));
        assert!(r.max_runs >= prev);
        prev = r.max_runs;
    }
}

#[test]
fn certificate_from_table_prefixes() {
    let table = KnownTable::reference();
    for d in 1..=20 {
        let (holds, cert) = check_finite_bound::<Rational>(d, &table, 12, 3).unwrap();
        assert_eq!(cert.checks.len(), d + 2);
        assert_eq!(holds, cert.checks.iter().all(|c| c.holds), "d = {d}");
    }
    let (holds, cert) = check_finite_bound::<Rational>(20, &table, 12, 3).unwrap();
    assert!(holds);
    assert_eq!(cert.bound * Rational::from_integer(23), Rational::from_integer(22));
    let partial: KnownTable = table.below(5);
    assert!(check_finite_bound::<Rational>(10, &partial, 12, 3).is_err());
}

#[test]
fn certificate_works_in_floating_point_too() {
    let (holds, cert) = check_finite_bound::<f64>(20, &KnownTable::reference(), 12, 3).unwrap();
    assert!(holds);
    assert!((cert.bound - 22.0 / 23.0).abs() < 1e-12);
}
