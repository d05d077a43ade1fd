//! The `runslab` command line.
//!
//! Every command prints one JSON report per input on stdout (keys sorted,
//! positions 1-based). Exit status: 0 on success or a passed check, 1 when a
//! verification fails, 2 on bad input or configuration.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{all_intervals_with_roots, idle_report, ownership, LyndonRootSet, PmInterval};
use crate::bounds::{self, check_finite_bound, limit_upper_bound, rho_brute, PRINTED_BOUNDS};
use crate::budget::Budget;
use crate::error::Error;
use crate::oracle::{self, Violation};
use crate::search::{self, dprime_floor, KnownTable, SearchOptions};
use crate::word::Word;
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "runslab", version, about = "Lyndon roots, idle positions and bounds on runs in binary words")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Period-maximal intervals, Lyndon roots, runs and idle positions of a word.
    /// Without WORD, reads one word per line from stdin.
    Analyze(AnalyzeArgs),
    /// Compute m_d by exhaustive search.
    Search(SearchArgs),
    /// Run an exhaustive or randomized check.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Maximum number of runs over binary words of length n.
    Rho(RhoArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub word: Option<String>,
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub d: Option<usize>,
    /// JSON file mapping d' to m_{d'}, e.g. {"1":63}.
    #[arg(long)]
    pub known: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    pub checkpoint_every: u64,
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[arg(long)]
    pub no_known_prune: bool,
    #[arg(long, default_value_t = 12)]
    pub split_depth: usize,
    /// Stop after this many checkpoint flushes (the checkpoint stays resumable).
    #[arg(long, hide = true)]
    pub stop_after_flushes: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// Root sets of distinct period-maximal intervals are disjoint.
    Lemma1 {
        #[arg(long)]
        maxlen: usize,
    },
    /// Every word of the given length has |D′(w)| >= min.
    DprimeFloor {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        min: usize,
    },
    /// A table of m_d agrees with the reference values and printed bounds.
    Table {
        #[arg(long)]
        file: PathBuf,
    },
    /// Certify the finite-word density bound from a table of m_d.
    Bound {
        #[arg(long, default_value_t = 20)]
        d: usize,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        t: usize,
        #[arg(long, default_value_t = 3)]
        c: usize,
    },
    /// Fast path agrees with the literal definitions.
    Oracle {
        #[arg(long)]
        maxlen: usize,
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 200)]
        random_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub witnesses: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let budget = Budget::from_env();
    let result = match cli.command {
        Command::Analyze(a) => return analyze(&a, stdin, out, err),
        Command::Search(a) => cmd_search(&a),
        Command::Verify { target } => cmd_verify(&target, budget),
        Command::Rho(a) => cmd_rho(&a, budget),
    };
    match result {
        Ok((report, code)) => {
            let _ = writeln!(out, "{report}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let mut input = stdin.lock();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    run(std::env::args_os(), &mut input, &mut out, &mut err)
}

fn report(command: &str, inputs: Value, result: Value, status: &str) -> Value {
    json!({ "command": command, "inputs": inputs, "result": result, "status": status })
}

fn status(pass: bool) -> (&'static str, i32) {
    if pass {
        ("pass", EXIT_OK)
    } else {
        ("fail", EXIT_FAIL)
    }
}

/// The `analyze` report for `w`.
pub fn analysis_report(w: &Word) -> Value {
    let sets: Vec<LyndonRootSet> = all_intervals_with_roots(w).into_values().collect();
    let idle = idle_report(w);
    let owners: Vec<Value> = ownership(w)
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| match e {
            Some(o) => json!({ "position": i + 1, "owner": o.owner.interval, "root": o.root }),
            None => json!({ "position": i + 1, "owner": null, "root": null }),
        })
        .collect();
    let result = json!({
        "length": w.len(),
        "intervals": sets,
        "ownership": owners,
        "runs": idle.runs,
        "charged": idle.charged,
        "idle": idle.idle,
        "d": idle.d,
        "d_prime": idle.d_prime,
    });
    report("analyze", json!({ "word": w }), result, "ok")
}

fn flags(s: &PmInterval) -> String {
    let mut f = format!("p={}", s.period);
    if s.is_run {
        f.push_str(" run");
    }
    match s.breaking_letter {
        Some(a) => f.push_str(&format!(" {a}-broken")),
        None => f.push_str(" right-open"),
    }
    if s.left_open {
        f.push_str(" left-open");
    }
    f
}

fn set_text<'a>(xs: impl IntoIterator<Item = &'a usize>) -> String {
    let items: Vec<String> = xs.into_iter().map(|k| k.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Human-readable rendering of the `analyze` results.
pub fn analysis_text(w: &Word) -> String {
    let mut s = format!("word {w} (length {})\n", w.len());
    for set in all_intervals_with_roots(w).values() {
        let roots: Vec<String> = set
            .roots
            .iter()
            .map(|r| {
                let tags: Vec<String> = serde_json::to_value(r.orders)
                    .ok()
                    .and_then(|v| v.as_array().cloned())
                    .unwrap_or_default()
                    .iter()
                    .map(|v| v.to_string())
                    .collect();
                format!("{}<{}>", r.interval, tags.join(""))
            })
            .collect();
        s.push_str(&format!(
            "  {} {}  roots {}  B={} B0={} B1={}\n",
            set.owner.interval,
            flags(&set.owner),
            roots.join(" "),
            set_text(&set.b),
            set_text(&set.b0),
            set_text(&set.b1),
        ));
    }
    let rep = idle_report(w);
    let runs: Vec<String> = rep.runs.iter().map(|r| r.interval.to_string()).collect();
    s.push_str(&format!("runs    {}\n", runs.join(" ")));
    s.push_str(&format!("charged {}\n", set_text(&rep.charged)));
    s.push_str(&format!("idle    {}\n", set_text(&rep.idle)));
    s.push_str(&format!("D       {}\n", set_text(&rep.d)));
    s.push_str(&format!("D′      {}\n", set_text(&rep.d_prime)));
    s
}

fn analyze(a: &AnalyzeArgs, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let words: Vec<String> = match &a.word {
        Some(w) => vec![w.clone()],
        None => stdin.lines().map_while(|l| l.ok()).filter(|l| !l.trim().is_empty()).collect(),
    };
    let mut code = EXIT_OK;
    for raw in words {
        match raw.trim().parse::<Word>() {
            Ok(w) => {
                let text = if a.text { analysis_text(&w) } else { analysis_report(&w).to_string() + "\n" };
                let _ = out.write_all(text.as_bytes());
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                code = EXIT_INPUT;
            }
        }
    }
    code
}

fn cmd_search(a: &SearchArgs) -> Result<(Value, i32), Error> {
    let known = match &a.known {
        Some(p) => KnownTable::load(p)?,
        None => KnownTable::new(),
    };
    let options = SearchOptions {
        threads: a.threads,
        known_prune: !a.no_known_prune,
        split_depth: a.split_depth,
        checkpoint: a.checkpoint.clone().or_else(|| a.resume.clone()),
        checkpoint_every: a.checkpoint_every.max(1),
        stop_after_flushes: a.stop_after_flushes,
    };
    let result = match (&a.resume, a.d) {
        (Some(path), _) => search::resume(path, &known, &options)?,
        (None, Some(d)) => search::compute_m_d(d, &known, &options)?,
        (None, None) => return Err(Error::Config("either --d or --resume is required".into())),
    };
    let inputs = json!({
        "d": result.d,
        "known": known,
        "known_prune": options.known_prune,
        "resume": a.resume,
    });
    let state = if result.completed { "ok" } else { "interrupted" };
    Ok((report("search", inputs, serde_json::to_value(&result)?, state), EXIT_OK))
}

fn all_words(max_len: usize) -> impl ParallelIterator<Item = Word> {
    (0..=max_len).into_par_iter().flat_map(|len| {
        (0u64..1 << len)
            .into_par_iter()
            .map(move |x| Word::from_bits(&(0..len).map(|i| (x >> i) as u8 & 1).collect::<Vec<_>>()))
    })
}

fn first_violation<F>(words: impl ParallelIterator<Item = Word>, check: F) -> Option<Violation>
where
    F: Fn(&Word) -> Result<(), Violation> + Sync + Send,
{
    words.filter_map(|w| check(&w).err()).min_by(|a, b| oracle::shortlex(&a.word, &b.word))
}

fn violation_report(command: &str, inputs: Value, checked: u64, found: Option<Violation>) -> (Value, i32) {
    let (st, code) = status(found.is_none());
    let result = json!({
        "words_checked": checked,
        "counterexample": found.as_ref().map(|v| v.word.to_string()),
        "violation": found.as_ref().map(|v| v.what.clone()),
    });
    (report(command, inputs, result, st), code)
}

fn cmd_verify(target: &VerifyTarget, budget: Budget) -> Result<(Value, i32), Error> {
    match *target {
        VerifyTarget::Lemma1 { maxlen } => {
            budget.check(maxlen)?;
            let found = first_violation(all_words(maxlen), |w| {
                oracle::check_disjoint_roots(w)?;
                fast_disjoint(w)
            });
            let checked = (1u64 << (maxlen + 1)) - 1;
            Ok(violation_report("verify lemma1", json!({ "maxlen": maxlen }), checked, found))
        }
        VerifyTarget::DprimeFloor { length, min } => {
            let (floor, witness) = dprime_floor(length, budget)?;
            let (st, code) = status(floor >= min);
            let result = json!({ "minimum": floor, "witness": witness, "words_checked": 1u64 << (length - 1) });
            Ok((report("verify dprime-floor", json!({ "length": length, "min": min }), result, st), code))
        }
        VerifyTarget::Table { ref file } => {
            let table = KnownTable::load(file)?;
            table.validate()?;
            Ok(verify_table(&table, file))
        }
        VerifyTarget::Bound { d, ref table, t, c } => {
            let table = match table {
                Some(p) => KnownTable::load(p)?,
                None => KnownTable::reference(),
            };
            table.validate()?;
            let (holds, cert) = check_finite_bound::<Rational>(d, &table, t, c)?;
            let (floor, witness) = dprime_floor(t + 1, budget)?;
            let (st, code) = status(holds && floor >= c);
            let result = json!({
                "certificate": cert,
                "inequalities_hold": holds,
                "tail_floor_certified": floor >= c,
                "tail_floor_minimum": floor,
                "tail_floor_witness": witness,
                "bound_decimal": bounds::truncated_decimal(&cert.bound, 20),
            });
            let inputs = json!({ "d": d, "t": t, "c": c, "table": table });
            Ok((report("verify bound", inputs, result, st), code))
        }
        VerifyTarget::Oracle { maxlen, random, random_len, seed } => {
            budget.check(maxlen)?;
            let mut found = first_violation(all_words(maxlen), oracle::check_fast_path);
            if found.is_none() && random > 0 {
                let mut rng = StdRng::seed_from_u64(seed);
                let words: Vec<Word> = (0..random)
                    .map(|_| {
                        let len = rng.gen_range(1..=random_len.max(1));
                        oracle::random_word(&mut rng, len)
                    })
                    .collect();
                found = first_violation(words.into_par_iter(), oracle::check_fast_path);
            }
            let checked = (1u64 << (maxlen + 1)) - 1 + random as u64;
            let inputs = json!({ "maxlen": maxlen, "random": random, "random_len": random_len, "seed": seed });
            Ok(violation_report("verify oracle", inputs, checked, found))
        }
    }
}

fn fast_disjoint(w: &Word) -> Result<(), Violation> {
    let mut seen = std::collections::BTreeMap::new();
    for set in all_intervals_with_roots(w).values() {
        for &k in &set.b {
            if let Some(prev) = seen.insert(k, set.owner.interval) {
                return Err(Violation {
                    word: w.clone(),
                    what: format!("fast path puts {k} in B({prev}) and B({})", set.owner.interval),
                });
            }
        }
    }
    Ok(())
}

fn verify_table(table: &KnownTable, file: &std::path::Path) -> (Value, i32) {
    let mut problems = Vec::new();
    if let Err(e) = table.check_reference() {
        problems.push(e);
    }
    let mut rows = Vec::new();
    for (d, m) in table.iter() {
        let row = match limit_upper_bound::<Rational>(d, m) {
            Ok(bound) => {
                let printed = PRINTED_BOUNDS.get(d - 1).copied();
                let matches = printed.map(|p| bounds::matches_printed(&bound, p));
                if matches == Some(false) {
                    problems.push(format!("bound for d = {d} does not match {}", printed.unwrap_or("")));
                }
                json!({
                    "d": d,
                    "m": m,
                    "bound": bound,
                    "decimal": bounds::truncated_decimal(&bound, 11),
                    "printed": printed,
                    "matches_printed": matches,
                })
            }
            Err(e) => {
                problems.push(e.to_string());
                json!({ "d": d, "m": m })
            }
        };
        rows.push(row);
    }
    let (st, code) = status(problems.is_empty());
    let result = json!({ "rows": rows, "problems": problems });
    (report("verify table", json!({ "file": file }), result, st), code)
}

fn cmd_rho(a: &RhoArgs, budget: Budget) -> Result<(Value, i32), Error> {
    let r = rho_brute(a.n, budget)?;
    let below = a.n == 0 || Rational::new(r.max_runs as i64, a.n as i64) < Rational::new(22, 23);
    let (st, code) = status(below);
    let mut result = json!({
        "n": r.n,
        "rho": r.max_runs,
        "density": [r.max_runs, r.n],
        "below_22_23": below,
        "witness_count": r.witnesses.len(),
    });
    if a.witnesses {
        result["witnesses"] = serde_json::to_value(&r.witnesses)?;
    }
    Ok((report("rho", json!({ "n": a.n, "witnesses": a.witnesses }), result, st), code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("runslab").chain(args.iter().copied()),
            &mut input,
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn analyze_single_letter() {
        let (code, out, _) = call(&["analyze", "0"], "");
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["runs"], json!([]));
        assert_eq!(v["result"]["idle"], json!([1]));
    }

    #[test]
    fn analyze_rejects_bad_word() {
        let (code, _, err) = call(&["analyze", "012"], "");
        assert_eq!(code, 2);
        assert!(err.contains("invalid character"));
    }

    #[test]
    fn analyze_batch_is_json_lines() {
        let (code, out, _) = call(&["analyze"], "01\n\n0011\n");
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        for l in lines {
            serde_json::from_str::<Value>(l).unwrap();
        }
        let (code, out, _) = call(&["analyze"], "01\nxx\n");
        assert_eq!((code, out.lines().count()), (2, 1));
    }

    #[test]
    fn analyze_text() {
        let (code, out, _) = call(&["analyze", "--text", "1110101101"], "");
        assert_eq!(code, 0);
        assert!(out.contains("[5..10] p=3 run right-open  roots [6..8]<0> [7..9]<1>"));
        assert!(out.contains("charged {3,5,7,8}"));
    }

    #[test]
    fn rho_small() {
        let (code, out, _) = call(&["rho", "--n", "2", "--witnesses"], "");
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["rho"], 1);
        assert_eq!(v["result"]["witnesses"], json!(["00"]));
        let (code, out, _) = call(&["rho", "--n", "1"], "");
        assert_eq!(code, 0);
        assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["result"]["rho"], 0);
        let (code, _, _) = call(&["rho", "--n", "60"], "");
        assert_eq!(code, 2);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["frobnicate"], "").0, 2);
        assert_eq!(call(&["search"], "").0, 2);
        assert_eq!(call(&["--help"], "").0, 0);
    }

    #[test]
    fn verify_small_targets() {
        assert_eq!(call(&["verify", "lemma1", "--maxlen", "8"], "").0, 0);
        assert_eq!(call(&["verify", "oracle", "--maxlen", "8", "--random", "20", "--random-len", "30"], "").0, 0);
        assert_eq!(call(&["verify", "dprime-floor", "--length", "2", "--min", "1"], "").0, 1);
        assert_eq!(call(&["verify", "dprime-floor", "--length", "2", "--min", "0"], "").0, 0);
    }
}
