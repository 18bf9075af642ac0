//! Seeded random inputs. Everything is drawn from a ChaCha stream, so a
//! seed pins every generated object.

use std::collections::BTreeSet;

use orderbench_core::order::FiniteOrder;
use orderbench_core::ordinal::Term;
use orderbench_core::ratseq::RatSeq;
use orderbench_core::tree::{LeveledTree, Node, NodeId, Payload};
use orderbench_core::{Ordinal, Rat};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Gen = ChaCha8Rng;

/// Independent streams per purpose, all derived from one seed.
pub fn rng(seed: u64, stream: u64) -> Gen {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A linear order on `1..=max` elements, given by shuffled keys.
pub fn finite_order(r: &mut Gen, max: usize) -> FiniteOrder {
    let n = r.random_range(1..=max);
    let mut keys: Vec<i64> = (0..n as i64).collect();
    keys.shuffle(r);
    FiniteOrder::from_keys(&keys)
}

/// Some ordinal below `w^3` with coefficients up to 3.
pub fn ordinal_below_w3(r: &mut Gen) -> Ordinal {
    let mut terms = Vec::new();
    for e in (0..3u32).rev() {
        let c: u32 = r.random_range(0..=3);
        if c > 0 {
            terms.push(Term::new(e, c));
        }
    }
    Ordinal::from_terms(terms).expect("decreasing exponents")
}

pub fn nonzero_ordinal_below_w3(r: &mut Gen) -> Ordinal {
    loop {
        let o = ordinal_below_w3(r);
        if !o.is_zero() {
            return o;
        }
    }
}

/// An ordinal `< bound` (which must be nonzero): a random CNF cut down
/// term by term.
pub fn ordinal_below(r: &mut Gen, bound: &Ordinal) -> Ordinal {
    let terms = bound.terms();
    let k = r.random_range(0..terms.len());
    let mut out: Vec<Term> = terms[..k].to_vec();
    let t = &terms[k];
    let c = t.coefficient.to_u32_digits().first().copied().unwrap_or(0);
    let keep = r.random_range(0..c);
    if keep > 0 {
        out.push(Term::new(t.exponent, keep));
    }
    for e in (0..t.exponent).rev() {
        let extra: u32 = r.random_range(0..=3);
        if extra > 0 {
            out.push(Term::new(e, extra));
        }
    }
    Ordinal::from_terms(out).expect("decreasing exponents")
}

pub fn small_rat(r: &mut Gen) -> Rat {
    Rat::new(r.random_range(-40i64..40), r.random_range(1i64..8))
}

/// A canonical sequence, sometimes with a few atoms or a second canonical
/// block appended.
pub fn ratseq(r: &mut Gen) -> RatSeq {
    let a = small_rat(r);
    let b = &a + &Rat::new(r.random_range(1i64..10), r.random_range(1i64..4));
    let mut s = RatSeq::canonical(&nonzero_ordinal_below_w3(r), &a, &b).expect("a < b");
    match r.random_range(0..3) {
        0 => {}
        1 => {
            for k in 1..=r.random_range(1i64..4) {
                s = s.extend(&b + &Rat::integer(k)).expect("above the sup");
            }
        }
        _ => {
            let c = &b + &Rat::new(1, r.random_range(1i64..5));
            let tail = RatSeq::canonical(&nonzero_ordinal_below_w3(r), &b, &c).expect("b < c");
            s = s.concat(&tail).expect("tail starts above b");
        }
    }
    s
}

fn distinct_labels(r: &mut Gen, k: usize) -> Vec<Rat> {
    let mut set = BTreeSet::new();
    while set.len() < k {
        set.insert(small_rat(r));
    }
    let mut v: Vec<Rat> = set.into_iter().collect();
    v.shuffle(r);
    v
}

/// A labelled tree on levels `0..=depth` (depth up to 4) with mixed branch
/// lengths and at most `max_branches` branches.
pub fn labelled_tree(r: &mut Gen, max_branches: usize) -> LeveledTree {
    let depth: u32 = r.random_range(1..=4);
    let mut t = LeveledTree::new((0..=depth).map(Ordinal::natural).collect(), false);
    t.add_node(Node::new(0, None, Ordinal::zero())).expect("root");
    let mut next: NodeId = 1;
    let mut leaves = 1usize;
    let mut frontier = vec![0u64];
    for d in 1..=depth {
        let mut grown = Vec::new();
        for &p in &frontier {
            let stop = d > 1 && r.random_bool(0.2);
            let want = if stop { 0 } else { r.random_range(1..=4usize) };
            let room = max_branches.saturating_sub(leaves) + 1;
            let k = want.min(room);
            if k == 0 {
                continue;
            }
            leaves += k - 1;
            for label in distinct_labels(r, k) {
                let n = Node::new(next, Some(p), Ordinal::natural(d)).with_payload(Payload::Label(label));
                t.add_node(n).expect("fresh id");
                grown.push(next);
                next += 1;
            }
        }
        frontier = grown;
    }
    t
}

fn limit_support(r: &mut Gen) -> (u32, bool) {
    (r.random_range(1..=3), r.random_bool(0.5))
}

fn support_for(finite: u32, limit: bool) -> Vec<Ordinal> {
    let mut s: Vec<Ordinal> = (0..=finite).map(Ordinal::natural).collect();
    if limit {
        for t in ["w", "w+1"] {
            s.push(t.parse().expect("notation"));
        }
    }
    s
}

/// Grows a tree over levels `0..=finite` (then `w`, `w+1` when `limit`).
/// Each node gets `lo..=hi` children at the next level; nodes at the last
/// finite level get `limit_children` children at `w`.
fn grow(r: &mut Gen, finite: u32, limit: bool, lo: usize, hi: usize, limit_children: usize) -> Vec<Node> {
    let support = support_for(finite, limit);
    let mut nodes = vec![Node::new(0, None, Ordinal::zero())];
    let mut frontier = vec![0u64];
    let mut next = 1u64;
    for level in &support[1..] {
        let at_limit = level.is_limit();
        let mut grown = Vec::new();
        for &p in &frontier {
            let k = if at_limit {
                limit_children
            } else {
                r.random_range(lo..=hi)
            };
            for _ in 0..k {
                nodes.push(Node::new(next, Some(p), level.clone()));
                grown.push(next);
                next += 1;
            }
        }
        frontier = grown;
    }
    nodes
}

/// A tree that is already normal for successor width 2: every node has two
/// or three children at the next level, one child at a limit level.
pub fn normal_tree(r: &mut Gen) -> LeveledTree {
    let (finite, limit) = limit_support(r);
    let nodes = grow(r, finite, limit, 2, 3, 1);
    let mut t = LeveledTree::from_nodes(support_for(finite, limit), nodes, false).expect("grown tree");
    t.set_declared_height(Some(t.height()));
    t
}

/// A normal tree spoiled in the ways normalization repairs: dead ends,
/// extra roots, non-branching points and duplicate nodes at the limit.
pub fn spoiled_tree(r: &mut Gen) -> LeveledTree {
    let (finite, limit) = limit_support(r);
    let limit_children = if limit { r.random_range(1..=3) } else { 1 };
    let mut nodes = grow(r, finite, limit, 1, 3, limit_children);
    let support = support_for(finite, limit);
    let mut next = nodes.iter().map(|n| n.id).max().unwrap_or(0) + 1;
    for _ in 0..r.random_range(0..4) {
        let p = r.random_range(0..nodes.len());
        let pl = nodes[p].level.clone();
        let above: Vec<&Ordinal> = support.iter().filter(|l| **l > pl).collect();
        if let Some(l) = above.first() {
            let n = Node::new(next, Some(nodes[p].id), (*l).clone());
            nodes.push(n);
            next += 1;
        }
    }
    for _ in 0..r.random_range(0..3) {
        let level = support[r.random_range(0..support.len())].clone();
        nodes.push(Node::new(next, None, level));
        next += 1;
    }
    LeveledTree::from_nodes(support, nodes, true).expect("grown tree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_pin_output() {
        let a: Vec<String> = (0..5).map(|_| format!("{:?}", ratseq(&mut rng(3, 1)))).collect();
        let b: Vec<String> = (0..5).map(|_| format!("{:?}", ratseq(&mut rng(3, 1)))).collect();
        assert_eq!(a, b);
        assert_ne!(
            format!("{:?}", labelled_tree(&mut rng(1, 0), 50)),
            format!("{:?}", labelled_tree(&mut rng(2, 0), 50))
        );
    }

    #[test]
    fn ordinal_below_is_below() {
        let mut r = rng(0, 0);
        for _ in 0..500 {
            let b = nonzero_ordinal_below_w3(&mut r);
            assert!(ordinal_below(&mut r, &b) < b);
        }
    }

    #[test]
    fn branch_cap() {
        let mut r = rng(9, 0);
        for _ in 0..50 {
            assert!(labelled_tree(&mut r, 30).max_antichain().len() <= 30);
        }
    }

    #[test]
    fn normal_trees_are_normal() {
        let mut r = rng(4, 0);
        for _ in 0..20 {
            let t = normal_tree(&mut r);
            assert!(t.check_normal(2).all_pass(), "{:?}", t.check_normal(2));
        }
    }
}
