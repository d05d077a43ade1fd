use runslab::search::{self, Checkpoint, KnownTable, SearchOptions};
use runslab::Word;

fn opts(threads: usize) -> SearchOptions {
    SearchOptions { threads: Some(threads), ..Default::default() }
}

#[test]
fn m1_is_independent_of_threads_and_split() {
    let none = KnownTable::new();
    let a = search::compute_m_d(1, &none, &opts(1)).unwrap();
    let b = search::compute_m_d(1, &none, &SearchOptions { split_depth: 4, ..opts(3) }).unwrap();
    assert_eq!(a.m_d, 63);
    assert_eq!((a.m_d, &a.critical_words), (b.m_d, &b.critical_words));
    let prefix: Word = a.deepest_word.letters().take(62).collect();
    assert!(runslab::analysis::compute_d(&prefix).is_empty());
    assert_eq!(runslab::analysis::compute_d(&a.deepest_word).len(), 1);
    for w in &a.critical_words {
        assert_eq!(w.len(), 62);
        assert!(runslab::analysis::compute_d(w).is_empty());
    }
}

#[test]
fn m2_with_and_without_known_prune() {
    let known = KnownTable::reference();
    let pruned = search::compute_m_d(2, &known, &opts(2)).unwrap();
    let plain = search::compute_m_d(2, &known, &SearchOptions { known_prune: false, ..opts(2) }).unwrap();
    assert_eq!(pruned.m_d, 96);
    assert_eq!(pruned.critical_words, plain.critical_words);
    assert!(pruned.pruned_counts.known_table > 0);
    assert_eq!(plain.pruned_counts.known_table, 0);
    assert!(pruned.nodes_visited < plain.nodes_visited);
}

#[test]
fn wrong_known_entry_is_rejected() {
    let bad: KnownTable = [(1, 64)].into_iter().collect();
    assert!(search::compute_m_d(2, &bad, &opts(1)).is_err());
}

#[test]
fn interrupted_search_resumes_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d1.ckpt");
    let none = KnownTable::new();
    let stopped = search::compute_m_d(
        1,
        &none,
        &SearchOptions { checkpoint: Some(path.clone()), checkpoint_every: 2_000, stop_after_flushes: Some(1), ..opts(1) },
    )
    .unwrap();
    assert!(!stopped.completed);
    let cp = Checkpoint::read(&path).unwrap();
    assert_eq!(cp.d, 1);
    assert!(!cp.pending.is_empty());
    let resumed = search::resume(&path, &none, &SearchOptions { checkpoint: Some(path.clone()), ..opts(2) }).unwrap();
    let full = search::compute_m_d(1, &none, &opts(1)).unwrap();
    assert!(resumed.completed);
    assert_eq!((resumed.m_d, resumed.critical_words), (full.m_d, full.critical_words));
}

#[test]
fn corrupt_checkpoint_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ckpt");
    std::fs::write(&path, "d=x best=3\n").unwrap();
    assert!(search::resume(&path, &KnownTable::new(), &opts(1)).is_err());
    std::fs::write(&path, "d=1 best=3\n01a\n").unwrap();
    assert!(search::resume(&path, &KnownTable::new(), &opts(1)).is_err());
}

#[test]
fn m4_matches_table() {
    let r = search::compute_m_d(4, &KnownTable::reference(), &SearchOptions::default()).unwrap();
    assert_eq!(r.m_d, 150);
}
