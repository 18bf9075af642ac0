//! One PASS/FAIL line per acceptance criterion, each against its time
//! limit. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use orderbench::suites::{self, Item};

const SEED: u64 = 7;

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Duration,
    /// The limit applies to each item rather than to the total.
    per_item: bool,
    run: fn() -> Vec<Item>,
}

fn secs(s: f64) -> Duration {
    Duration::from_secs_f64(s)
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "back-and-forth, all ordered pairs of built-in DLOs, 64 rounds",
            limit: secs(1.0),
            per_item: true,
            run: || suites::back_and_forth_pairs(64),
        },
        Criterion {
            id: 2,
            title: "embedding of 200 finite orders and w, w*2 into Q",
            limit: secs(2.0),
            per_item: false,
            run: || suites::embeddings(SEED, 200, 200),
        },
        Criterion {
            id: 3,
            title: "completion extension agrees with cuts and is monotone",
            limit: secs(2.0),
            per_item: false,
            run: || suites::completions(SEED, 100, 4),
        },
        Criterion {
            id: 4,
            title: "rational sequence coherence and canonical sequences",
            limit: secs(2.0),
            per_item: false,
            run: || suites::ratseq_coherence(SEED, 1000, 200),
        },
        Criterion {
            id: 5,
            title: "Aronszajn build over 0..10, w..w+5, w*2 with a 16-point grid",
            limit: secs(10.0),
            per_item: false,
            run: || {
                suites::aronszajn(
                    &suites::acceptance_support(),
                    &suites::acceptance_grid(),
                    Some(suites::ACCEPTANCE_FANOUT),
                )
            },
        },
        Criterion {
            id: 6,
            title: "normalization of 50 trees, idempotence, normal inputs untouched",
            limit: secs(5.0),
            per_item: false,
            run: || suites::normalization(SEED, 50),
        },
        Criterion {
            id: 7,
            title: "branch lines of 20 labelled trees and their interval trees",
            limit: secs(10.0),
            per_item: false,
            run: || {
                suites::line_tree(SEED, 20, 200)
                    .into_iter()
                    .filter(|i| i.criterion == 7)
                    .collect()
            },
        },
        Criterion {
            id: 8,
            title: "honest oracle over Q ends in a density report",
            limit: secs(1.0),
            per_item: false,
            run: || vec![suites::honest_q()],
        },
    ]
}

fn main() -> ExitCode {
    let mut failed = 0;
    for c in criteria() {
        let start = Instant::now();
        let items = (c.run)();
        let total = start.elapsed();
        let mut problems: Vec<String> = items
            .iter()
            .filter(|i| !i.passed)
            .map(|i| format!("{}: {}", i.name, i.detail))
            .collect();
        let slowest = items.iter().map(|i| i.elapsed).max().unwrap_or_default();
        let measured = if c.per_item { slowest } else { total };
        if measured > c.limit {
            problems.push(format!("took {measured:.2?}, limit {:.2?}", c.limit));
        }
        if items.is_empty() {
            problems.push("no items ran".into());
        }
        let checked: u64 = items.iter().map(|i| i.checked).sum();
        let timing = if c.per_item {
            format!("slowest {slowest:.2?} of {} (limit {:.2?} each)", items.len(), c.limit)
        } else {
            format!("{total:.2?} (limit {:.2?})", c.limit)
        };
        if problems.is_empty() {
            println!("PASS criterion {}: {} [{checked} checks, {timing}]", c.id, c.title);
        } else {
            failed += 1;
            println!(
                "FAIL criterion {}: {} [{timing}] {}",
                c.id,
                c.title,
                problems.join("; ")
            );
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
