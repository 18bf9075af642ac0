//! The line/tree correspondence, both ways, on finite objects.
//!
//! [`BranchLine`] orders the root-to-leaf branches of a labelled tree
//! lexicographically; a node `x` becomes the interval `I_x` of branches
//! through it. [`line_to_tree`] goes back: it asks a [`GapOracle`] for an
//! interval missing every endpoint seen so far, stage after stage, and
//! arranges the answers by reverse inclusion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::order::{cmp, Bound, EnumeratedOrder, Interval, OrderError, Rationals};
use crate::ordinal::Ordinal;
use crate::rat::Rat;
use crate::tree::{LeveledTree, Node, NodeId, Payload, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuslinError {
    #[error("node {0} has siblings but no label")]
    MissingLabels(NodeId),
    #[error("node {0} repeats a sibling's label")]
    DuplicateLabel(NodeId),
    #[error("not a branch of the line")]
    UnknownBranch,
    #[error("branches through node {0} are not contiguous")]
    NotContiguous(NodeId),
    #[error("nodes {0:?} are not an antichain")]
    NotAntichain((NodeId, NodeId)),
    #[error("stage {stage}: the oracle's interval meets an earlier endpoint")]
    OracleUnsound { stage: usize },
    #[error("stage {stage}: interval overlaps stage {earlier} without nesting")]
    NotNested { stage: usize, earlier: usize },
    #[error("nodes {0} and {1}: interval overlap disagrees with comparability")]
    Correspondence(NodeId, NodeId),
    #[error("node {0} was chosen as a witness but meets C")]
    WitnessFailed(NodeId),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchLine {
    tree: LeveledTree,
    labels: BTreeMap<NodeId, Rat>,
    branches: Vec<Vec<NodeId>>,
    index: BTreeMap<Vec<NodeId>, usize>,
}

/// The lexicographic rule on paths that start at the same root (or at
/// labelled roots). A strict prefix comes first.
fn compare_paths(labels: &BTreeMap<NodeId, Rat>, a: &[NodeId], b: &[NodeId]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return match (labels.get(x), labels.get(y)) {
                (Some(p), Some(q)) => p.cmp(q),
                _ => x.cmp(y),
            };
        }
    }
    a.len().cmp(&b.len())
}

/// Reads sibling labels and orders the branches of `t`.
pub fn tree_to_line(t: &LeveledTree) -> Result<BranchLine, SuslinError> {
    let mut groups: BTreeMap<Option<NodeId>, Vec<&Node>> = BTreeMap::new();
    for n in t.nodes() {
        groups.entry(n.parent).or_default().push(n);
    }
    let mut labels = BTreeMap::new();
    for group in groups.values() {
        let mut seen = BTreeSet::new();
        for n in group {
            match &n.payload {
                Payload::Label(r) => {
                    if !seen.insert(r) {
                        return Err(SuslinError::DuplicateLabel(n.id));
                    }
                    labels.insert(n.id, r.clone());
                }
                _ if group.len() > 1 => return Err(SuslinError::MissingLabels(n.id)),
                _ => {}
            }
        }
    }
    let mut branches = t.branches();
    branches.sort_by(|a, b| compare_paths(&labels, a, b));
    let index = branches.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
    Ok(BranchLine {
        tree: t.clone(),
        labels,
        branches,
        index,
    })
}

/// A branch's length: one more than the level of its last node.
fn branch_length(t: &LeveledTree, b: &[NodeId]) -> Ordinal {
    let last = *b.last().expect("branches are nonempty");
    t.node(last).expect("branch node").level.successor()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeInterval {
    pub node: NodeId,
    /// First and last branch through the node, as line positions.
    pub first: usize,
    pub last: usize,
    /// The same set as an open interval of the line.
    pub interval: Interval,
}

impl NodeInterval {
    pub fn meets(&self, other: &NodeInterval) -> bool {
        self.first <= other.last && other.first <= self.last
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderViolation {
    Reflexive(usize),
    Asymmetric(usize, usize),
    Intransitive(usize, usize, usize),
    Misplaced(usize),
}

impl BranchLine {
    pub fn tree(&self) -> &LeveledTree {
        &self.tree
    }

    pub fn branches(&self) -> &[Vec<NodeId>] {
        &self.branches
    }

    pub fn label(&self, id: NodeId) -> Option<&Rat> {
        self.labels.get(&id)
    }

    pub fn position(&self, branch: &[NodeId]) -> Option<usize> {
        self.index.get(branch).copied()
    }

    pub fn compare_branches(&self, b1: &[NodeId], b2: &[NodeId]) -> Result<Ordering, SuslinError> {
        if self.position(b1).is_none() || self.position(b2).is_none() {
            return Err(SuslinError::UnknownBranch);
        }
        Ok(compare_paths(&self.labels, b1, b2))
    }

    /// Brute force over all pairs and triples of branches, using the
    /// lexicographic rule rather than the stored positions; also checks the
    /// positions agree with the rule.
    pub fn check_total_order(&self) -> Result<usize, OrderViolation> {
        let n = self.branches.len();
        let m: Vec<Vec<Ordering>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| compare_paths(&self.labels, &self.branches[i], &self.branches[j]))
                    .collect()
            })
            .collect();
        for i in 0..n {
            if m[i][i] != Ordering::Equal {
                return Err(OrderViolation::Reflexive(i));
            }
            for j in 0..n {
                if i != j && (m[i][j] == Ordering::Equal || m[i][j] != m[j][i].reverse()) {
                    return Err(OrderViolation::Asymmetric(i, j));
                }
            }
            if i + 1 < n && m[i][i + 1] != Ordering::Less {
                return Err(OrderViolation::Misplaced(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != Ordering::Less {
                    continue;
                }
                for k in 0..n {
                    if m[j][k] == Ordering::Less && m[i][k] != Ordering::Less {
                        return Err(OrderViolation::Intransitive(i, j, k));
                    }
                }
            }
        }
        Ok(n * n * n)
    }

    /// `I_x`: the branches through `x`, which must be contiguous.
    pub fn interval_of_node(&self, x: NodeId) -> Result<NodeInterval, SuslinError> {
        self.tree.node(x)?;
        let through: Vec<usize> = (0..self.branches.len())
            .filter(|&i| self.branches[i].contains(&x))
            .collect();
        let (first, last) = (through[0], *through.last().expect("every node is on a branch"));
        if last - first + 1 != through.len() {
            return Err(SuslinError::NotContiguous(x));
        }
        let lower = if first == 0 {
            Bound::NegInf
        } else {
            Bound::At(first - 1)
        };
        let upper = if last + 1 == self.branches.len() {
            Bound::PosInf
        } else {
            Bound::At(last + 1)
        };
        Ok(NodeInterval {
            node: x,
            first,
            last,
            interval: Interval::new(lower, upper),
        })
    }

    pub fn node_intervals(&self) -> Result<BTreeMap<NodeId, NodeInterval>, SuslinError> {
        self.tree
            .nodes()
            .map(|n| Ok((n.id, self.interval_of_node(n.id)?)))
            .collect()
    }

    /// `I_x` and `I_y` are disjoint exactly when `x` and `y` are
    /// incomparable, over every pair of nodes.
    pub fn check_disjointness(&self) -> Result<usize, SuslinError> {
        let ivs = self.node_intervals()?;
        let ids: Vec<NodeId> = ivs.keys().copied().collect();
        let mut pairs = 0;
        for (k, &x) in ids.iter().enumerate() {
            for &y in &ids[k + 1..] {
                pairs += 1;
                if ivs[&x].meets(&ivs[&y]) != self.tree.comparable(x, y) {
                    return Err(SuslinError::Correspondence(x, y));
                }
            }
        }
        Ok(pairs)
    }

    /// The intervals of an antichain, ready for `verify_disjoint_family`.
    pub fn antichain_family(&self, ids: &[NodeId]) -> Result<Vec<Interval>, SuslinError> {
        if let crate::tree::Antichain::Comparable(a, b) = self.tree.is_antichain(ids)? {
            return Err(SuslinError::NotAntichain((a, b)));
        }
        ids.iter().map(|&x| Ok(self.interval_of_node(x)?.interval)).collect()
    }

    /// A node above every branch in `c`: its level exceeds every branch
    /// length. Least level first, then least id.
    pub fn non_separability_witness(&self, c: &[usize]) -> Result<Option<NodeId>, SuslinError> {
        let mut longest: Option<Ordinal> = None;
        for &i in c {
            let b = self.branches.get(i).ok_or(SuslinError::UnknownBranch)?;
            let len = branch_length(&self.tree, b);
            if longest.as_ref().is_none_or(|l| len > *l) {
                longest = Some(len);
            }
        }
        let found = self
            .tree
            .nodes()
            .filter(|n| longest.as_ref().is_none_or(|l| n.level > *l))
            .min_by(|a, b| a.level.cmp(&b.level).then(a.id.cmp(&b.id)));
        let Some(x) = found else { return Ok(None) };
        let iv = self.interval_of_node(x.id)?;
        if c.iter().any(|&i| iv.first <= i && i <= iv.last) {
            return Err(SuslinError::WitnessFailed(x.id));
        }
        Ok(Some(x.id))
    }
}

impl EnumeratedOrder for BranchLine {
    fn len(&self) -> Option<usize> {
        Some(self.branches.len())
    }

    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        (i < self.branches.len() && j < self.branches.len()).then(|| i.cmp(&j))
    }

    fn name(&self) -> String {
        String::from("branch-line")
    }

    fn gap_is_empty(&self, i: usize, j: usize) -> Option<bool> {
        (i < j && j < self.branches.len()).then_some(j == i + 1)
    }

    fn describe(&self, i: usize) -> String {
        format!("b{i}")
    }
}

/// Why an oracle stopped: the endpoints gathered so far meet every interval
/// it can see.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseReport {
    pub stage: usize,
    pub endpoints: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    /// The closed interval `[lower, upper]`, `lower <= upper`.
    Interval {
        lower: usize,
        upper: usize,
    },
    Dense(DenseReport),
}

pub trait GapOracle {
    /// An interval missing every element of `endpoints`, or a density
    /// report. Must be deterministic.
    fn query(&mut self, stage: usize, endpoints: &BTreeSet<usize>) -> OracleAnswer;
}

/// For branch lines: the node whose interval avoids the endpoints,
/// shallowest first, then least id.
pub struct BranchOracle<'a> {
    line: &'a BranchLine,
    intervals: BTreeMap<NodeId, NodeInterval>,
    chosen: Vec<NodeId>,
}

impl<'a> BranchOracle<'a> {
    pub fn new(line: &'a BranchLine) -> Result<Self, SuslinError> {
        Ok(BranchOracle {
            line,
            intervals: line.node_intervals()?,
            chosen: Vec::new(),
        })
    }

    /// The node behind each answer so far.
    pub fn chosen(&self) -> &[NodeId] {
        &self.chosen
    }
}

impl GapOracle for BranchOracle<'_> {
    fn query(&mut self, stage: usize, endpoints: &BTreeSet<usize>) -> OracleAnswer {
        let pick = self
            .line
            .tree
            .nodes()
            .filter(|n| {
                let iv = &self.intervals[&n.id];
                endpoints.range(iv.first..=iv.last).next().is_none()
            })
            .min_by(|a, b| a.level.cmp(&b.level).then(a.id.cmp(&b.id)));
        match pick {
            Some(n) => {
                self.chosen.push(n.id);
                let iv = &self.intervals[&n.id];
                OracleAnswer::Interval {
                    lower: iv.first,
                    upper: iv.last,
                }
            }
            None => OracleAnswer::Dense(DenseReport {
                stage,
                endpoints: endpoints.len(),
                reason: String::from("every node interval meets an endpoint"),
            }),
        }
    }
}

/// For `Q` in its standard enumeration: looks at the first `budget`
/// rationals inside `(lo, hi)` and returns two neighbours among them that
/// are not yet endpoints, the pair nearest the window's midpoint. When every
/// neighbouring pair has an endpoint, the endpoints are dense at this
/// resolution and it says so.
#[derive(Debug, Clone)]
pub struct HonestQ {
    lo: Rat,
    hi: Rat,
    budget: usize,
}

impl HonestQ {
    pub fn new(lo: Rat, hi: Rat, budget: usize) -> Self {
        HonestQ { lo, hi, budget }
    }
}

impl Default for HonestQ {
    fn default() -> Self {
        HonestQ::new(Rat::zero(), Rat::one(), 64)
    }
}

impl GapOracle for HonestQ {
    fn query(&mut self, stage: usize, endpoints: &BTreeSet<usize>) -> OracleAnswer {
        let mut seen: Vec<(Rat, usize)> = (0..self.budget)
            .map(|i| (Rationals::value(i), i))
            .filter(|(v, _)| *v > self.lo && *v < self.hi)
            .collect();
        seen.sort();
        let centre = self.lo.midpoint(&self.hi);
        let best = seen
            .windows(2)
            .filter(|w| !endpoints.contains(&w[0].1) && !endpoints.contains(&w[1].1))
            .min_by_key(|w| (w[0].0.midpoint(&w[1].0) - centre.clone()).abs());
        match best {
            Some(w) => OracleAnswer::Interval {
                lower: w[0].1,
                upper: w[1].1,
            },
            None => OracleAnswer::Dense(DenseReport {
                stage,
                endpoints: endpoints.len(),
                reason: format!(
                    "endpoints meet every gap between the first {} rationals in ({}, {})",
                    self.budget, self.lo, self.hi
                ),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalTree {
    /// Node `s` is the stage-`s` interval, with a `Span` payload; levels
    /// count strictly larger intervals.
    pub tree: LeveledTree,
    pub intervals: Vec<(usize, usize)>,
    pub dense: Option<DenseReport>,
}

fn inside<P: EnumeratedOrder + ?Sized>(p: &P, k: usize, lo: usize, hi: usize) -> Result<bool, OrderError> {
    Ok(cmp(p, lo, k)? != Ordering::Greater && cmp(p, k, hi)? != Ordering::Greater)
}

/// Runs up to `steps` stages. Stage `s` passes every earlier endpoint to
/// the oracle; the answer is checked against them and against every earlier
/// interval (nested inside or disjoint), then hung below the smallest
/// earlier interval containing it.
pub fn line_to_tree<P: EnumeratedOrder + ?Sized, O: GapOracle + ?Sized>(
    p: &P,
    oracle: &mut O,
    steps: usize,
) -> Result<IntervalTree, SuslinError> {
    let mut endpoints = BTreeSet::new();
    let mut intervals: Vec<(usize, usize)> = Vec::new();
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut depth: Vec<u32> = Vec::new();
    let mut dense = None;
    for stage in 0..steps {
        let (a, b) = match oracle.query(stage, &endpoints) {
            OracleAnswer::Interval { lower, upper } => (lower, upper),
            OracleAnswer::Dense(r) => {
                dense = Some(r);
                break;
            }
        };
        if cmp(p, a, b)? == Ordering::Greater {
            return Err(SuslinError::OracleUnsound { stage });
        }
        for &c in &endpoints {
            if inside(p, c, a, b)? {
                return Err(SuslinError::OracleUnsound { stage });
            }
        }
        let mut parent: Option<usize> = None;
        for (j, &(aj, bj)) in intervals.iter().enumerate() {
            let nested = inside(p, a, aj, bj)? && inside(p, b, aj, bj)?;
            let apart = cmp(p, b, aj)? == Ordering::Less || cmp(p, bj, a)? == Ordering::Less;
            if nested {
                if parent.is_none_or(|q| depth[j] > depth[q]) {
                    parent = Some(j);
                }
            } else if !apart {
                return Err(SuslinError::NotNested { stage, earlier: j });
            }
        }
        depth.push(parent.map_or(0, |q| depth[q] + 1));
        parents.push(parent);
        intervals.push((a, b));
        endpoints.insert(a);
        endpoints.insert(b);
    }
    let top = depth.iter().copied().max().map_or(0, |d| d + 1);
    let mut tree = LeveledTree::new((0..top).map(Ordinal::natural).collect(), true);
    for (s, &(a, b)) in intervals.iter().enumerate() {
        let node = Node::new(s as u64, parents[s].map(|q| q as u64), Ordinal::natural(depth[s]));
        tree.add_node(node.with_payload(Payload::Span { lower: a, upper: b }))?;
    }
    Ok(IntervalTree { tree, intervals, dense })
}

/// Along the chain from the root down to `stage`, the open gaps between
/// consecutive left endpoints. Gaps the order certifies empty are dropped
/// and counted.
pub fn chain_gaps<P: EnumeratedOrder + ?Sized>(
    p: &P,
    it: &IntervalTree,
    stage: usize,
) -> Result<(Vec<Interval>, usize), SuslinError> {
    let path = it.tree.path(stage as u64)?;
    let lefts: Vec<usize> = path.iter().map(|&s| it.intervals[s as usize].0).collect();
    let mut family = Vec::new();
    let mut skipped = 0;
    for w in lefts.windows(2) {
        if p.gap_is_empty(w[0], w[1]) == Some(true) {
            skipped += 1;
        } else {
            family.push(Interval::between(w[0], w[1]));
        }
    }
    Ok((family, skipped))
}

/// Interval-tree comparability must be implied by comparability of the
/// nodes the oracle picked.
pub fn check_round_trip(line: &BranchLine, it: &IntervalTree, chosen: &[NodeId]) -> Result<usize, (usize, usize)> {
    let n = it.intervals.len();
    let mut pairs = 0;
    for s in 0..n {
        for t in s + 1..n {
            pairs += 1;
            let above = it.tree.comparable(s as u64, t as u64);
            if above && !line.tree.comparable(chosen[s], chosen[t]) {
                return Err((s, t));
            }
        }
    }
    Ok(pairs)
}

/// A full tree of the given depth and branching, labelled `0, 1, ...` among
/// siblings; ids are breadth-first from 0.
pub fn labelled_full_tree(depth: u32, width: u64) -> LeveledTree {
    let mut t = LeveledTree::new((0..=depth).map(Ordinal::natural).collect(), false);
    t.add_node(Node::new(0, None, Ordinal::zero())).expect("root");
    let mut frontier = vec![0u64];
    let mut next = 1u64;
    for d in 1..=depth {
        let mut grown = Vec::new();
        for &p in &frontier {
            for k in 0..width {
                let n =
                    Node::new(next, Some(p), Ordinal::natural(d)).with_payload(Payload::Label(Rat::integer(k as i64)));
                t.add_node(n).expect("fresh id");
                grown.push(next);
                next += 1;
            }
        }
        frontier = grown;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::verify_disjoint_family;

    fn labelled(edges: &[(NodeId, Option<NodeId>, u32, i64)]) -> LeveledTree {
        let top = edges.iter().map(|e| e.2).max().unwrap();
        let nodes = edges
            .iter()
            .map(|&(id, p, l, lab)| {
                Node::new(id, p, Ordinal::natural(l)).with_payload(Payload::Label(Rat::integer(lab)))
            })
            .collect();
        LeveledTree::from_nodes((0..=top).map(Ordinal::natural).collect(), nodes, false).unwrap()
    }

    #[test]
    fn single_node_and_path() {
        let one = labelled(&[(0, None, 0, 0)]);
        assert_eq!(tree_to_line(&one).unwrap().branches().len(), 1);
        let path = labelled(&[(0, None, 0, 0), (1, Some(0), 1, 5), (2, Some(1), 2, 3)]);
        assert_eq!(tree_to_line(&path).unwrap().branches(), [vec![0, 1, 2]]);
    }

    #[test]
    fn binary_depth_two_order() {
        let line = tree_to_line(&labelled_full_tree(2, 2)).unwrap();
        // ids: 1 = "0", 2 = "1", 3 = "00", 4 = "01", 5 = "10", 6 = "11"
        assert_eq!(
            line.branches(),
            [vec![0, 1, 3], vec![0, 1, 4], vec![0, 2, 5], vec![0, 2, 6]]
        );
        assert!(line.check_total_order().is_ok());
        assert_eq!(line.compare_branches(&[0, 1, 3], &[0, 1, 3]).unwrap(), Ordering::Equal);
        assert_eq!(line.compare_branches(&[0, 1, 4], &[0, 2, 5]).unwrap(), Ordering::Less);
        assert_eq!(line.compare_branches(&[0], &[0, 1, 3]), Err(SuslinError::UnknownBranch));
    }

    #[test]
    fn labels_decide_not_ids() {
        let t = labelled(&[(0, None, 0, 0), (1, Some(0), 1, 9), (2, Some(0), 1, -3)]);
        let line = tree_to_line(&t).unwrap();
        assert_eq!(line.branches(), [vec![0, 2], vec![0, 1]]);
    }

    #[test]
    fn missing_and_duplicate_labels() {
        let mut t = LeveledTree::new(vec![Ordinal::zero(), Ordinal::one()], false);
        t.add_node(Node::new(0, None, Ordinal::zero())).unwrap();
        t.add_node(Node::new(1, Some(0), Ordinal::one())).unwrap();
        t.add_node(Node::new(2, Some(0), Ordinal::one()).with_payload(Payload::Label(Rat::zero())))
            .unwrap();
        assert_eq!(tree_to_line(&t), Err(SuslinError::MissingLabels(1)));
        let d = labelled(&[(0, None, 0, 0), (1, Some(0), 1, 1), (2, Some(0), 1, 1)]);
        assert_eq!(tree_to_line(&d), Err(SuslinError::DuplicateLabel(2)));
    }

    #[test]
    fn node_intervals() {
        let line = tree_to_line(&labelled_full_tree(2, 2)).unwrap();
        let root = line.interval_of_node(0).unwrap();
        assert_eq!((root.first, root.last), (0, 3));
        assert_eq!(root.interval, Interval::new(Bound::NegInf, Bound::PosInf));
        let (a, b) = (line.interval_of_node(1).unwrap(), line.interval_of_node(2).unwrap());
        assert!(!a.meets(&b));
        let leaf = line.interval_of_node(4).unwrap();
        assert!(leaf.meets(&a) && a.first <= leaf.first && leaf.last <= a.last);
        assert!(line.check_disjointness().is_ok());
    }

    #[test]
    fn antichains_give_disjoint_families() {
        let line = tree_to_line(&labelled_full_tree(3, 2)).unwrap();
        let leaves = line.tree().max_antichain();
        let fam = line.antichain_family(&leaves).unwrap();
        assert!(verify_disjoint_family(&line, &fam, 64).unwrap().is_disjoint());
        assert!(matches!(
            line.antichain_family(&[0, 1]),
            Err(SuslinError::NotAntichain(_))
        ));
    }

    #[test]
    fn witnesses() {
        let mixed = labelled(&[
            (0, None, 0, 0),
            (1, Some(0), 1, 0),
            (2, Some(0), 1, 1),
            (3, Some(0), 1, 2),
            (4, Some(3), 2, 0),
            (5, Some(4), 3, 0),
            (6, Some(4), 3, 1),
        ]);
        let line = tree_to_line(&mixed).unwrap();
        assert_eq!(line.non_separability_witness(&[]).unwrap(), Some(0));
        let short: Vec<usize> = (0..line.branches().len())
            .filter(|&i| line.branches()[i].len() == 2)
            .collect();
        assert_eq!(short.len(), 2);
        assert_eq!(line.non_separability_witness(&short).unwrap(), Some(5));
        let all: Vec<usize> = (0..line.branches().len()).collect();
        assert_eq!(line.non_separability_witness(&all).unwrap(), None);
    }

    #[test]
    fn computable_oracle_builds_nested_intervals() {
        let line = tree_to_line(&labelled_full_tree(3, 2)).unwrap();
        let mut oracle = BranchOracle::new(&line).unwrap();
        let it = line_to_tree(&line, &mut oracle, 4).unwrap();
        assert_eq!(it.intervals.len(), 4);
        assert!(it.dense.is_none());
        assert!(check_round_trip(&line, &it, oracle.chosen()).is_ok());
        let (fam, _) = chain_gaps(&line, &it, 3).unwrap();
        assert!(verify_disjoint_family(&line, &fam, 64).unwrap().is_disjoint());
    }

    #[test]
    fn zero_steps() {
        let it = line_to_tree(&Rationals, &mut HonestQ::default(), 0).unwrap();
        assert!(it.tree.is_empty() && it.dense.is_none());
    }

    #[test]
    fn honest_oracle_on_q_reports_density() {
        let it = line_to_tree(&Rationals, &mut HonestQ::default(), 1000).unwrap();
        let d = it.dense.expect("dense");
        assert_eq!(d.stage, it.intervals.len());
        assert!(d.stage > 0);
    }

    struct Liar;
    impl GapOracle for Liar {
        fn query(&mut self, _: usize, _: &BTreeSet<usize>) -> OracleAnswer {
            OracleAnswer::Interval { lower: 1, upper: 0 }
        }
    }

    #[test]
    fn unsound_oracle_is_caught() {
        // a0 = 0 < a1 = 1 in the enumeration of Q
        struct Repeat;
        impl GapOracle for Repeat {
            fn query(&mut self, _: usize, _: &BTreeSet<usize>) -> OracleAnswer {
                OracleAnswer::Interval { lower: 0, upper: 1 }
            }
        }
        let r = line_to_tree(&Rationals, &mut Repeat, 2);
        assert_eq!(r, Err(SuslinError::OracleUnsound { stage: 1 }));
        assert_eq!(
            line_to_tree(&Rationals, &mut Liar, 1),
            Err(SuslinError::OracleUnsound { stage: 0 })
        );
    }
}
