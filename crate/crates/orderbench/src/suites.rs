//! Invariant suites. Each check returns items that say what was checked
//! and whether it held; wall-clock time is kept out of the serialized
//! report so reruns with one seed print the same bytes.

use std::time::{Duration, Instant};

use orderbench_core::aronszajn::AronszajnBuild;
use orderbench_core::backforth::{back_and_forth, embed_into_rationals, extend_to_completion, PartialIso};
use orderbench_core::order::{
    builtin, cmp, verify_disjoint_family, Cut, EnumeratedOrder, Omega, OmegaTwo, PointCut, PredicateCut, Rationals,
    BUILTIN_DLOS,
};
use orderbench_core::suslin::{check_round_trip, line_to_tree, tree_to_line, BranchOracle, HonestQ};
use orderbench_core::tree::{normalize, Antichain, LeveledTree, NodeId, TreeError};
use orderbench_core::{Ordinal, Rat};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::gen;

pub const SUITES: [&str; 7] = ["thm3.3", "thm3.7", "thm4.4", "thm4.10", "lem4.7", "lem4.8", "all"];

/// Search budget for the back-and-forth engine inside the suites.
pub const BF_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, Serialize)]
pub struct Item {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Item {
    fn new(criterion: u8, name: impl Into<String>) -> Self {
        Item {
            criterion,
            name: name.into(),
            passed: true,
            checked: 0,
            detail: String::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn fail(&mut self, detail: impl Into<String>) {
        if self.passed {
            self.passed = false;
            self.detail = detail.into();
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub items: Vec<Item>,
}

fn timed(mut f: impl FnMut() -> Item) -> Item {
    let start = Instant::now();
    let mut item = f();
    item.elapsed = start.elapsed();
    item
}

fn dlo_pairs() -> Vec<(&'static str, &'static str)> {
    BUILTIN_DLOS
        .iter()
        .flat_map(|a| BUILTIN_DLOS.iter().map(move |b| (*a, *b)))
        .collect()
}

/// Back-and-forth over every ordered pair of built-in dense orders.
/// `rounds` rounds, an exhaustive order/injectivity check, and coverage of
/// the first `rounds / 2` elements on each side.
pub fn back_and_forth_pairs(rounds: usize) -> Vec<Item> {
    dlo_pairs()
        .into_iter()
        .map(|(an, bn)| {
            timed(|| {
                let (a, b) = (builtin(an).expect("builtin"), builtin(bn).expect("builtin"));
                let mut item = Item::new(1, format!("back-and-forth {an} -> {bn}"));
                let iso = match back_and_forth(&*a, &*b, rounds, BF_BUDGET) {
                    Ok(iso) => iso,
                    Err(e) => {
                        item.fail(e.to_string());
                        return item;
                    }
                };
                match iso.verify(&*a, &*b) {
                    Ok(None) => {}
                    Ok(Some((x, y))) => item.fail(format!("pair a{x}, a{y} not preserved")),
                    Err(e) => item.fail(e.to_string()),
                }
                let n = iso.len() as u64;
                item.checked = n * n;
                let half = rounds / 2;
                if let Some(i) = (0..half).find(|&i| iso.get(i).is_none() || iso.preimage(i).is_none()) {
                    item.fail(format!("element {i} not covered"));
                }
                if item.passed {
                    item.detail = format!("{} pairs, first {half} covered on both sides", iso.len());
                }
                item
            })
        })
        .collect()
}

fn check_embedding<P: EnumeratedOrder + ?Sized>(p: &P, n: usize, item: &mut Item) {
    let img = match embed_into_rationals(p, n) {
        Ok(v) => v,
        Err(e) => return item.fail(e.to_string()),
    };
    for i in 0..img.len() {
        for j in 0..img.len() {
            item.checked += 1;
            match cmp(p, i, j) {
                Ok(o) if o == img[i].cmp(&img[j]) => {}
                Ok(_) => return item.fail(format!("{}: a{i}, a{j} not preserved", p.name())),
                Err(e) => return item.fail(e.to_string()),
            }
        }
    }
}

/// Embeddings of `count` random finite orders and of `w`, `w*2` into `Q`.
pub fn embeddings(seed: u64, count: usize, max: usize) -> Vec<Item> {
    let finite = timed(|| {
        let mut item = Item::new(2, format!("{count} seeded finite orders"));
        let mut r = gen::rng(seed, 2);
        for _ in 0..count {
            let f = gen::finite_order(&mut r, max);
            check_embedding(&f, max, &mut item);
        }
        item
    });
    let wells = timed(|| {
        let mut item = Item::new(2, format!("w and w*2, first {max}"));
        check_embedding(&Omega, max, &mut item);
        check_embedding(&OmegaTwo, max, &mut item);
        item
    });
    vec![finite, wells]
}

fn sample_values<P: EnumeratedOrder + ?Sized>(p: &P, r: &mut impl Rng, n: usize) -> Rat {
    p.rational(r.random_range(0..n))
        .expect("built-in dense orders live in Q")
}

fn completion_pair(
    an: &str,
    bn: &str,
    seed: u64,
    points: usize,
    probes: usize,
    rounds: usize,
    item: &mut Item,
) -> Result<(), String> {
    let (a, b) = (builtin(an).expect("builtin"), builtin(bn).expect("builtin"));
    let iso: PartialIso = back_and_forth(&*a, &*b, rounds, BF_BUDGET).map_err(|e| e.to_string())?;
    let domain: Vec<usize> = iso.pairs().map(|(x, _)| x).collect();
    let covered = rounds / 2;
    let mut r = gen::rng(seed, 3);
    let budget = BF_BUDGET;
    for _ in 0..points {
        let p = *domain.choose(&mut r).expect("nonempty");
        let x = PointCut::new(&*a, p);
        let ext = extend_to_completion(&*b, &iso, &x, budget);
        let image = PointCut::new(&*b, iso.get(p).expect("in domain"));
        for _ in 0..probes {
            let q = r.random_range(0..covered);
            item.checked += 1;
            let got = ext.contains(q).map_err(|e| e.to_string())?;
            if got != image.contains(q).map_err(|e| e.to_string())? {
                return Err(format!("{an}->{bn}: I*(<= a{p}) and <= I(a{p}) differ at b{q}"));
            }
        }
    }
    for _ in 0..points {
        let (mut c1, mut c2) = (sample_values(&*a, &mut r, covered), sample_values(&*a, &mut r, covered));
        if c2 < c1 {
            std::mem::swap(&mut c1, &mut c2);
        }
        let a_ref = &*a;
        let x = PredicateCut::new(format!("< {c1}"), |i| a_ref.rational(i).is_some_and(|v| v < c1));
        let y = PredicateCut::new(format!("< {c2}"), |i| a_ref.rational(i).is_some_and(|v| v < c2));
        let (ex, ey) = (
            extend_to_completion(&*b, &iso, &x, budget),
            extend_to_completion(&*b, &iso, &y, budget),
        );
        for _ in 0..probes {
            let q = r.random_range(0..covered);
            item.checked += 1;
            let (inx, iny) = (
                ex.contains(q).map_err(|e| e.to_string())?,
                ey.contains(q).map_err(|e| e.to_string())?,
            );
            if inx && !iny {
                return Err(format!("{an}->{bn}: b{q} in I*(< {c1}) but not in I*(< {c2})"));
            }
        }
    }
    Ok(())
}

/// Extension of back-and-forth maps to cuts, per built-in pair: agreement
/// with the map on point cuts and monotonicity on nested threshold cuts.
pub fn completions(seed: u64, points: usize, probes: usize) -> Vec<Item> {
    dlo_pairs()
        .into_iter()
        .enumerate()
        .map(|(k, (an, bn))| {
            timed(|| {
                let mut item = Item::new(3, format!("completion {an} -> {bn}"));
                if let Err(e) = completion_pair(an, bn, seed.wrapping_add(k as u64), points, probes, 64, &mut item) {
                    item.fail(e);
                }
                if item.passed {
                    item.detail = format!("{points} point cuts and {points} cut pairs");
                }
                item
            })
        })
        .collect()
}

/// Monotonicity and restrict/at coherence on random sequences, then length
/// and bounds of canonical sequences.
pub fn ratseq_coherence(seed: u64, sequences: usize, canonicals: usize) -> Vec<Item> {
    let seqs = timed(|| {
        let mut item = Item::new(4, format!("{sequences} seeded sequences"));
        let mut r = gen::rng(seed, 4);
        for n in 0..sequences {
            let s = gen::ratseq(&mut r);
            let len = s.length().clone();
            let (i, j) = (gen::ordinal_below(&mut r, &len), gen::ordinal_below(&mut r, &len));
            let (x, y) = (s.at(&i), s.at(&j));
            item.checked += 1;
            match (x, y) {
                (Ok(x), Ok(y)) if i.cmp(&j) == x.cmp(&y) => {}
                _ => return fail_at(item, format!("sequence {n} {s:?}: entries {i}, {j} out of order")),
            }
            let beta = gen::ordinal_below(&mut r, &len.successor());
            let cut = match s.restrict(&beta) {
                Ok(c) => c,
                Err(e) => return fail_at(item, format!("sequence {n}: {e}")),
            };
            item.checked += 1;
            if cut.length() != &beta || !cut.is_initial_segment(&s) {
                return fail_at(item, format!("sequence {n}: restriction to {beta} is wrong"));
            }
            if !beta.is_zero() {
                let k = gen::ordinal_below(&mut r, &beta);
                item.checked += 1;
                if cut.at(&k).ok() != s.at(&k).ok() {
                    return fail_at(
                        item,
                        format!("sequence {n}: entry {k} changes under restriction to {beta}"),
                    );
                }
            }
        }
        item
    });
    let canon = timed(|| {
        let mut item = Item::new(4, format!("{canonicals} canonical sequences"));
        let mut r = gen::rng(seed, 5);
        for _ in 0..canonicals {
            let alpha = gen::nonzero_ordinal_below_w3(&mut r);
            let a = gen::small_rat(&mut r);
            let b = &a + &Rat::new(r.random_range(1i64..20), r.random_range(1i64..6));
            item.checked += 1;
            match orderbench_core::ratseq::RatSeq::canonical(&alpha, &a, &b) {
                Ok(s) if s.length() == &alpha && s.sup().finite().is_some_and(|v| *v <= b) => {}
                _ => return fail_at(item, format!("canonical({alpha}, {a}, {b})")),
            }
        }
        item
    });
    vec![seqs, canon]
}

fn fail_at(mut item: Item, detail: String) -> Item {
    item.fail(detail);
    item
}

pub fn acceptance_support() -> Vec<Ordinal> {
    let mut s: Vec<Ordinal> = (0..=10u32).map(Ordinal::natural).collect();
    for t in ["w", "w+1", "w+2", "w+3", "w+4", "w+5", "w*2"] {
        s.push(t.parse().expect("notation"));
    }
    s
}

pub fn acceptance_grid() -> Vec<Rat> {
    (0..16).map(Rat::integer).collect()
}

/// Fan-out used for the acceptance-scale build.
pub const ACCEPTANCE_FANOUT: usize = 2;

/// All invariants of one Aronszajn build.
pub fn aronszajn_checks(b: &AronszajnBuild) -> Item {
    let mut item = Item::new(5, "aronszajn invariants");
    let c1 = b.check_condition1();
    item.checked += c1.pairs as u64;
    if let Some(f) = &c1.failure {
        item.fail(format!(
            "condition (1): node {} at {} has nothing at {} below {}",
            f.node, f.lower, f.upper, f.q
        ));
    }
    let down = b.check_downward_closure();
    item.checked += down.checked as u64;
    if let Some((id, why)) = down.failure {
        item.fail(format!("downward closure at node {id}: {why:?}"));
    }
    match b.check_increasing() {
        Ok(n) => item.checked += n as u64,
        Err((x, y)) => item.fail(format!("specializing map not increasing from {x} to {y}")),
    }
    let fib = b.check_fibers();
    if let Some((x, y)) = fib.comparable {
        item.fail(format!("fiber holds comparable nodes {x} and {y}"));
    }
    if !fib.covers || fib.largest < fib.bound {
        item.fail(format!("fiber bound: largest {} < {}", fib.largest, fib.bound));
    }
    let top = b.grid().last().expect("grid");
    if let Some(id) = b.ids().find(|&i| b.specializing_map(i).is_ok_and(|v| v > *top)) {
        item.fail(format!("node {id} has supremum above the grid"));
    }
    if item.passed {
        item.detail = format!(
            "{} nodes over {} levels, {} values, largest fiber {} >= {}",
            b.len(),
            b.support().len(),
            fib.values,
            fib.largest,
            fib.bound
        );
    }
    item
}

pub fn aronszajn(support: &[Ordinal], grid: &[Rat], fanout: Option<usize>) -> Vec<Item> {
    vec![timed(|| match AronszajnBuild::build(support, grid, fanout) {
        Ok(b) => aronszajn_checks(&b),
        Err(e) => fail_at(Item::new(5, "aronszajn invariants"), e.to_string()),
    })]
}

/// Normalization of spoiled trees (properties 2, 5, 6 and idempotence) and
/// of normal trees (empty stage log).
pub fn normalization(seed: u64, count: usize) -> Vec<Item> {
    let spoiled = timed(|| {
        let mut item = Item::new(6, format!("{count} seeded trees admitting normalization"));
        let mut r = gen::rng(seed, 6);
        let (mut stages, mut degenerate) = (0, 0);
        // Degenerate draws do not admit normalization; draw replacements.
        for n in 0..count * 4 {
            if item.checked as usize == count {
                break;
            }
            let t = gen::spoiled_tree(&mut r);
            let (out, log) = match normalize(&t, 2) {
                Ok(x) => x,
                Err(TreeError::Degenerate(_)) => {
                    degenerate += 1;
                    continue;
                }
                Err(e) => return fail_at(item, format!("tree {n}: {e}")),
            };
            stages += log.len();
            let rep = out.check_normal(2);
            item.checked += 1;
            if let Some(k) = [2, 5, 6].into_iter().find(|&k| !rep.passes(k)) {
                return fail_at(
                    item,
                    format!("tree {n}: property ({k}) fails: {:?}", rep.results[k - 1]),
                );
            }
            match normalize(&out, 2) {
                Ok((again, log2)) if log2.is_empty() && again == out => {}
                _ => return fail_at(item, format!("tree {n}: second pass changed the tree")),
            }
        }
        if (item.checked as usize) < count {
            let got = item.checked;
            return fail_at(item, format!("only {got} of {count} draws admit normalization"));
        }
        item.detail = format!("{stages} stage entries, {degenerate} degenerate draws replaced");
        item
    });
    let normal = timed(|| {
        let mut item = Item::new(6, format!("{count} seeded normal trees"));
        let mut r = gen::rng(seed, 7);
        for n in 0..count {
            let t = gen::normal_tree(&mut r);
            item.checked += 1;
            match normalize(&t, 2) {
                Ok((out, log)) if log.is_empty() && out == t => {}
                Ok((_, log)) => return fail_at(item, format!("tree {n}: stage log {log:?}")),
                Err(e) => return fail_at(item, format!("tree {n}: {e}")),
            }
        }
        item
    });
    vec![spoiled, normal]
}

fn random_antichain(t: &LeveledTree, r: &mut impl Rng) -> Vec<NodeId> {
    let ids: Vec<NodeId> = t.nodes().map(|n| n.id).collect();
    let mut out: Vec<NodeId> = Vec::new();
    for _ in 0..r.random_range(1..=8) {
        let x = *ids.choose(r).expect("nonempty tree");
        if out.iter().all(|&y| !t.comparable(x, y)) {
            out.push(x);
        }
    }
    out
}

fn line_checks(t: &LeveledTree, r: &mut impl Rng, item: &mut Item) -> Result<(), String> {
    let line = tree_to_line(t).map_err(|e| e.to_string())?;
    item.checked += line.check_total_order().map_err(|v| format!("{v:?}"))? as u64;
    item.checked += line.check_disjointness().map_err(|e| e.to_string())? as u64;
    let mut families: Vec<Vec<NodeId>> = vec![t.max_antichain()];
    for level in t.occupied_levels() {
        families.push(t.nodes().filter(|n| n.level == level).map(|n| n.id).collect());
    }
    for _ in 0..20 {
        families.push(random_antichain(t, r));
    }
    for fam in &families {
        if t.is_antichain(fam).map_err(|e| e.to_string())? != Antichain::Yes {
            return Err("generated family is not an antichain".into());
        }
        let ivs = line.antichain_family(fam).map_err(|e| e.to_string())?;
        item.checked += 1;
        if !verify_disjoint_family(&line, &ivs, BF_BUDGET)
            .map_err(|e| e.to_string())?
            .is_disjoint()
        {
            return Err(format!("antichain {fam:?} has overlapping intervals"));
        }
    }
    let mut oracle = BranchOracle::new(&line).map_err(|e| e.to_string())?;
    let it = line_to_tree(&line, &mut oracle, 16).map_err(|e| e.to_string())?;
    item.checked += check_round_trip(&line, &it, oracle.chosen()).map_err(|(s, u)| format!("stages {s}, {u}"))? as u64;
    let n = line.branches().len();
    for _ in 0..20 {
        let c: Vec<usize> = (0..n).filter(|_| r.random_bool(0.3)).collect();
        let longest = c
            .iter()
            .map(|&i| {
                t.node(*line.branches()[i].last().expect("branch"))
                    .expect("node")
                    .level
                    .successor()
            })
            .max();
        let expected = t.nodes().any(|x| longest.as_ref().is_none_or(|l| x.level > *l));
        item.checked += 1;
        let got = line.non_separability_witness(&c).map_err(|e| e.to_string())?;
        if got.is_some() != expected {
            return Err(format!("witness for C = {c:?}: got {got:?}"));
        }
    }
    Ok(())
}

/// Branch lines of seeded labelled trees, and the interval tree of `Q`.
pub fn line_tree(seed: u64, count: usize, max_branches: usize) -> Vec<Item> {
    let lines = timed(|| {
        let mut item = Item::new(7, format!("{count} seeded labelled trees"));
        let mut r = gen::rng(seed, 8);
        for n in 0..count {
            let t = gen::labelled_tree(&mut r, max_branches);
            if let Err(e) = line_checks(&t, &mut r, &mut item) {
                return fail_at(item, format!("tree {n}: {e}"));
            }
        }
        item
    });
    vec![lines, honest_q()]
}

pub fn honest_q() -> Item {
    timed(|| {
        let mut item = Item::new(8, "honest oracle over Q");
        match line_to_tree(&Rationals, &mut HonestQ::default(), 100_000) {
            Ok(it) => match it.dense {
                Some(d) => {
                    item.checked = it.intervals.len() as u64;
                    item.detail = format!("dense at stage {} with {} endpoints", d.stage, d.endpoints);
                }
                None => item.fail("no density report"),
            },
            Err(e) => item.fail(e.to_string()),
        }
        item
    })
}

/// Runs a named suite with the default sizes.
/// Runs a named suite with the default sizes; `None` for an unknown name.
pub fn run(suite: &str, seed: u64) -> Option<SuiteReport> {
    let groups: [(&str, fn(u64) -> Vec<Item>); 6] = [
        ("thm3.3", |_| back_and_forth_pairs(64)),
        ("thm4.4", |seed| embeddings(seed, 200, 200)),
        ("thm3.7", |seed| completions(seed, 100, 4)),
        ("thm4.10", |seed| {
            let mut v = ratseq_coherence(seed, 1000, 200);
            v.extend(aronszajn(
                &acceptance_support(),
                &acceptance_grid(),
                Some(ACCEPTANCE_FANOUT),
            ));
            v
        }),
        ("lem4.7", |seed| normalization(seed, 50)),
        ("lem4.8", |seed| line_tree(seed, 20, 200)),
    ];
    let chosen: Vec<_> = groups
        .iter()
        .filter(|(name, _)| suite == "all" || suite == *name)
        .collect();
    if chosen.is_empty() {
        return None;
    }
    // Groups run concurrently; sorting below fixes the output order.
    let mut items: Vec<Item> = std::thread::scope(|sc| {
        let handles: Vec<_> = chosen.iter().map(|(_, f)| sc.spawn(move || f(seed))).collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite thread"))
            .collect()
    });
    items.sort_by(|a, b| a.criterion.cmp(&b.criterion).then_with(|| a.name.cmp(&b.name)));
    let passed = items.iter().all(|i| i.passed);
    Some(SuiteReport {
        suite: suite.to_string(),
        seed,
        passed,
        items,
    })
}
