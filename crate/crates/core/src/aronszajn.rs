//! A finite fragment of the special Aronszajn tree: levels of strictly
//! increasing rational sequences, one level per support ordinal.
//!
//! Nodes are stored by parent pointer plus the tail that extends the
//! parent, so a node at `w*2` costs a few segments rather than a full copy
//! of its history. [`AronszajnBuild::sequence`] materializes a node.
//!
//! The supremum of the empty sequence is taken to be `min(grid) - 1`, which
//! makes the specializing map total.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::ordinal::{Ordinal, OrdinalError};
use crate::rat::Rat;
use crate::ratseq::{RatSeq, RatSeqError};
use crate::tree::{LeveledTree, Node, Payload, TreeError};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AronszajnError {
    #[error("support must contain 0")]
    MissingZero,
    #[error("level {0} is in the support but its predecessor is not")]
    SupportGap(Ordinal),
    #[error("the grid needs at least two points")]
    GridTooCoarse,
    #[error("no grid point lies above the supremum of node {0}")]
    NoTarget(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {id}: {reason}")]
    Malformed { id: u64, reason: &'static str },
    #[error(transparent)]
    Seq(#[from] RatSeqError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    /// Entries after the parent's.
    Tail(RatSeq),
    /// The whole sequence, as read back from a file.
    Whole(RatSeq),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ANode {
    parent: Option<NodeId>,
    level: usize,
    piece: Piece,
    value: Rat,
    provenance: Option<(NodeId, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AronszajnBuild {
    support: Vec<Ordinal>,
    grid: Vec<Rat>,
    fanout: Option<usize>,
    nodes: Vec<Option<ANode>>,
    levels: Vec<Vec<NodeId>>,
    /// Child of least value, per node.
    min_child: Vec<Option<NodeId>>,
}

fn check_support(support: &mut Vec<Ordinal>) -> Result<(), AronszajnError> {
    support.sort();
    support.dedup();
    if support.first().is_none_or(|z| !z.is_zero()) {
        return Err(AronszajnError::MissingZero);
    }
    for a in support.iter() {
        if let Some(p) = a.predecessor() {
            if support.binary_search(&p).is_err() {
                return Err(AronszajnError::SupportGap(a.clone()));
            }
        }
    }
    Ok(())
}

fn check_grid(grid: &mut Vec<Rat>) -> Result<(), AronszajnError> {
    grid.sort();
    grid.dedup();
    if grid.len() < 2 {
        return Err(AronszajnError::GridTooCoarse);
    }
    Ok(())
}

impl AronszajnBuild {
    fn empty(support: Vec<Ordinal>, grid: Vec<Rat>, fanout: Option<usize>) -> Self {
        let levels = vec![Vec::new(); support.len()];
        AronszajnBuild {
            support,
            grid,
            fanout,
            nodes: Vec::new(),
            levels,
            min_child: Vec::new(),
        }
    }

    /// Builds every support level. With `fanout = Some(f)` each node only
    /// targets the `f` least grid points above its supremum; `None` targets
    /// all of them.
    pub fn build(support: &[Ordinal], grid: &[Rat], fanout: Option<usize>) -> Result<Self, AronszajnError> {
        let mut support = support.to_vec();
        let mut grid = grid.to_vec();
        check_support(&mut support)?;
        check_grid(&mut grid)?;
        let root_value = &grid[0] - &Rat::one();
        let mut b = AronszajnBuild::empty(support, grid, fanout.map(|f| f.max(1)));
        b.push(None, 0, Piece::Tail(RatSeq::empty()), root_value, None);
        for k in 1..b.support.len() {
            if b.support[k].is_successor() {
                b.successor_level(k)?;
            } else {
                b.limit_level(k)?;
            }
        }
        Ok(b)
    }

    fn push(
        &mut self,
        parent: Option<NodeId>,
        level: usize,
        piece: Piece,
        value: Rat,
        prov: Option<(NodeId, Rat)>,
    ) -> NodeId {
        let id = self.nodes.len();
        if let Some(p) = parent {
            let better = match self.min_child[p] {
                None => true,
                Some(c) => value < self.node(c).value,
            };
            if better {
                self.min_child[p] = Some(id);
            }
        }
        self.nodes.push(Some(ANode {
            parent,
            level,
            piece,
            value,
            provenance: prov,
        }));
        self.min_child.push(None);
        self.levels[level].push(id);
        id
    }

    fn node(&self, id: NodeId) -> &ANode {
        self.nodes[id].as_ref().expect("live node")
    }

    fn targets(&self, id: NodeId) -> Result<Vec<Rat>, AronszajnError> {
        let v = &self.node(id).value;
        let start = self.grid.partition_point(|g| g <= v);
        let mut out: Vec<Rat> = self.grid[start..].to_vec();
        if out.is_empty() {
            return Err(AronszajnError::NoTarget(id));
        }
        if let Some(f) = self.fanout {
            out.truncate(f);
        }
        Ok(out)
    }

    fn successor_level(&mut self, k: usize) -> Result<(), AronszajnError> {
        for x in self.levels[k - 1].clone() {
            for q in self.targets(x)? {
                let r = self.node(x).value.midpoint(&q);
                let tail = RatSeq::empty().extend(r.clone())?;
                self.push(Some(x), k, Piece::Tail(tail), r, Some((x, q)));
            }
        }
        Ok(())
    }

    /// For each `x` below level `k` and each target `q` not yet served by a
    /// node at `k`, follow least-valued children from `x` up to level
    /// `k - 1` and extend the node `z` reached by the canonical sequence of
    /// the missing length into `(m, m')`, where `m` is the midpoint of
    /// `sup z` and `q` and `m'` the midpoint of `m` and `q`.
    fn limit_level(&mut self, k: usize) -> Result<(), AronszajnError> {
        let delta = self.support[k - 1].subtract_left(&self.support[k])?;
        let below: Vec<NodeId> = (0..self.nodes.len())
            .filter(|&i| self.nodes[i].as_ref().is_some_and(|n| n.level < k))
            .collect();
        let mut best: Vec<Option<Rat>> = vec![None; self.nodes.len()];
        for x in below {
            for q in self.targets(x)? {
                if best[x].as_ref().is_some_and(|b| *b <= q) {
                    continue;
                }
                let mut z = x;
                while self.node(z).level < k - 1 {
                    z = self.min_child[z].expect("every node has a child at the next level");
                }
                let m = self.node(z).value.midpoint(&q);
                let top = m.midpoint(&q);
                let tail = RatSeq::canonical(&delta, &m, &top)?;
                let y = self.push(Some(z), k, Piece::Tail(tail), top.clone(), Some((x, q)));
                let mut up = self.node(y).parent;
                while let Some(a) = up {
                    if best[a].as_ref().is_none_or(|b| top < *b) {
                        best[a] = Some(top.clone());
                    }
                    up = self.node(a).parent;
                }
            }
        }
        Ok(())
    }

    pub fn support(&self) -> &[Ordinal] {
        &self.support
    }

    pub fn grid(&self) -> &[Rat] {
        &self.grid
    }

    pub fn fanout(&self) -> Option<usize> {
        self.fanout
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Live node ids at each support level.
    pub fn level_sets(&self) -> impl Iterator<Item = (&Ordinal, Vec<NodeId>)> {
        self.support.iter().zip(&self.levels).map(|(a, ids)| {
            let live = ids.iter().copied().filter(|&i| self.nodes[i].is_some()).collect();
            (a, live)
        })
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].is_some())
    }

    fn live(&self, id: NodeId) -> Result<&ANode, AronszajnError> {
        self.nodes
            .get(id)
            .and_then(Option::as_ref)
            .ok_or(AronszajnError::UnknownNode(id))
    }

    pub fn level(&self, id: NodeId) -> Result<&Ordinal, AronszajnError> {
        Ok(&self.support[self.live(id)?.level])
    }

    pub fn parent(&self, id: NodeId) -> Result<Option<NodeId>, AronszajnError> {
        Ok(self.live(id)?.parent)
    }

    /// The `(x, q)` pair a node was generated for.
    pub fn provenance(&self, id: NodeId) -> Result<Option<(NodeId, &Rat)>, AronszajnError> {
        Ok(self.live(id)?.provenance.as_ref().map(|(x, q)| (*x, q)))
    }

    fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        core::iter::successors(self.node(id).parent, move |&a| self.node(a).parent)
    }

    pub fn sequence(&self, id: NodeId) -> Result<RatSeq, AronszajnError> {
        let mut chain = vec![id];
        let mut cur = id;
        loop {
            let n = self.live(cur)?;
            match (&n.piece, n.parent) {
                (Piece::Tail(_), Some(p)) => {
                    chain.push(p);
                    cur = p;
                }
                _ => break,
            }
        }
        let mut seq = RatSeq::empty();
        for &c in chain.iter().rev() {
            seq = match &self.node(c).piece {
                Piece::Tail(t) => seq.concat(t)?,
                Piece::Whole(w) => w.clone(),
            };
        }
        Ok(seq)
    }

    /// The supremum of a node's sequence, with `min(grid) - 1` for the root.
    pub fn specializing_map(&self, id: NodeId) -> Result<Rat, AronszajnError> {
        Ok(self.live(id)?.value.clone())
    }

    /// Deletes a node together with everything above it.
    pub fn remove_node(&mut self, id: NodeId) -> Result<Vec<NodeId>, AronszajnError> {
        self.live(id)?;
        let mut gone = BTreeSet::from([id]);
        for i in id + 1..self.nodes.len() {
            if let Some(n) = &self.nodes[i] {
                if n.parent.is_some_and(|p| gone.contains(&p)) {
                    gone.insert(i);
                }
            }
        }
        for &g in &gone {
            self.nodes[g] = None;
        }
        for p in 0..self.nodes.len() {
            if self.min_child[p].is_some_and(|c| gone.contains(&c)) {
                self.min_child[p] = None;
            }
        }
        Ok(gone.into_iter().collect())
    }

    /// Condition (1) on the grid: for every `x` at a level `b`, every level
    /// `a > b` and every grid `q > sup x`, some node at `a` extends `x` with
    /// supremum at most `q`. It is enough to test the least such `q`.
    pub fn check_condition1(&self) -> Condition1Report {
        let mut pairs = 0;
        for k in 1..self.support.len() {
            let mut best: Vec<Option<&Rat>> = vec![None; self.nodes.len()];
            for &y in &self.levels[k] {
                if self.nodes[y].is_none() {
                    continue;
                }
                let v = &self.node(y).value;
                for a in self.ancestors(y) {
                    if best[a].is_none_or(|b| v < b) {
                        best[a] = Some(v);
                    }
                }
            }
            for x in self.ids().filter(|&x| self.node(x).level < k) {
                let v = &self.node(x).value;
                let start = self.grid.partition_point(|g| g <= v);
                let Some(q) = self.grid.get(start) else { continue };
                pairs += self.grid.len() - start;
                if best[x].is_none_or(|b| b > q) {
                    return Condition1Report {
                        pairs,
                        failure: Some(Condition1Failure {
                            lower: self.support[self.node(x).level].clone(),
                            node: x,
                            upper: self.support[k].clone(),
                            q: q.clone(),
                        }),
                    };
                }
            }
        }
        Condition1Report { pairs, failure: None }
    }

    /// Walks the tree depth first, materializing each sequence once, and
    /// checks that each node's sequence has its level as length, restricts
    /// to its parent's sequence at the parent's level, that the parent sits
    /// at the preceding support level, and that siblings differ.
    pub fn check_downward_closure(&self) -> DownwardReport {
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); self.nodes.len()];
        let mut roots = Vec::new();
        for id in self.ids() {
            match self.node(id).parent {
                Some(p) => children[p].push(id),
                None => roots.push(id),
            }
        }
        let fail = |node, problem| DownwardReport {
            checked: 0,
            failure: Some((node, problem)),
        };
        if roots.len() != 1 {
            return fail(roots.get(1).copied().unwrap_or(0), Closure::Roots);
        }
        let mut checked = 0;
        let mut stack: Vec<(NodeId, RatSeq)> = Vec::new();
        let root = roots[0];
        match self.sequence(root) {
            Ok(s) if s.is_empty() && self.node(root).level == 0 => stack.push((root, s)),
            _ => return fail(root, Closure::Length),
        }
        while let Some((id, seq)) = stack.pop() {
            checked += 1;
            let n = self.node(id);
            let mut seen = BTreeSet::new();
            for &c in &children[id] {
                let cn = self.node(c);
                if cn.level != n.level + 1 {
                    return fail(c, Closure::SkippedLevel);
                }
                if !seen.insert(&cn.value) {
                    return fail(c, Closure::Duplicate);
                }
                let cs = match &cn.piece {
                    Piece::Tail(t) => match seq.concat(t) {
                        Ok(s) => s,
                        Err(_) => return fail(c, Closure::NotIncreasing),
                    },
                    Piece::Whole(w) => w.clone(),
                };
                if cs.length() != &self.support[cn.level] {
                    return fail(c, Closure::Length);
                }
                if cs.sup().finite() != Some(&cn.value) {
                    return fail(c, Closure::Value);
                }
                match cs.restrict(&self.support[n.level]) {
                    Ok(r) if r == seq => {}
                    _ => return fail(c, Closure::Restriction),
                }
                stack.push((c, cs));
            }
        }
        DownwardReport { checked, failure: None }
    }

    /// Every ancestor pair, exhaustively.
    pub fn check_increasing(&self) -> Result<usize, (NodeId, NodeId)> {
        let mut pairs = 0;
        for y in self.ids() {
            let v = &self.node(y).value;
            for a in self.ancestors(y) {
                pairs += 1;
                if self.node(a).value >= *v {
                    return Err((a, y));
                }
            }
        }
        Ok(pairs)
    }

    /// Nodes mapped to `q`, in id order.
    pub fn fiber_antichain(&self, q: &Rat) -> Vec<NodeId> {
        self.ids().filter(|&i| self.node(i).value == *q).collect()
    }

    pub fn fibers(&self) -> BTreeMap<Rat, Vec<NodeId>> {
        let mut out: BTreeMap<Rat, Vec<NodeId>> = BTreeMap::new();
        for i in self.ids() {
            out.entry(self.node(i).value.clone()).or_default().push(i);
        }
        out
    }

    /// The first comparable pair inside `ids`, if any.
    pub fn comparable_pair(&self, ids: &[NodeId]) -> Option<(NodeId, NodeId)> {
        let set: BTreeSet<NodeId> = ids.iter().copied().collect();
        ids.iter()
            .find_map(|&y| self.ancestors(y).find(|a| set.contains(a)).map(|a| (a, y)))
    }

    pub fn check_fibers(&self) -> FiberReport {
        let fibers = self.fibers();
        let largest = fibers.values().map(Vec::len).max().unwrap_or(0);
        let bound = self.len().div_ceil(fibers.len().max(1));
        let comparable = fibers.values().find_map(|f| self.comparable_pair(f));
        let covered: usize = fibers.values().map(Vec::len).sum();
        FiberReport {
            values: fibers.len(),
            largest,
            bound,
            comparable,
            covers: covered == self.len(),
        }
    }

    /// A tree view; node `i` gets id `i`. Sequences are materialized when
    /// `with_sequences` is set.
    pub fn to_tree(&self, with_sequences: bool) -> Result<LeveledTree, AronszajnError> {
        let mut t = LeveledTree::new(self.support.clone(), false);
        for id in self.ids() {
            let n = self.node(id);
            let payload = if with_sequences {
                Payload::Seq(self.sequence(id)?)
            } else {
                Payload::Label(n.value.clone())
            };
            let node = Node::new(id as u64, n.parent.map(|p| p as u64), self.support[n.level].clone());
            t.add_node(node.with_payload(payload))?;
        }
        Ok(t)
    }

    /// Reads a build back from a tree whose nodes carry their full
    /// sequences. Ids are renumbered in (level, id) order; provenance is
    /// lost.
    pub fn from_tree(tree: &LeveledTree, grid: &[Rat]) -> Result<Self, AronszajnError> {
        let mut support = tree.support().to_vec();
        let mut grid = grid.to_vec();
        check_support(&mut support)?;
        check_grid(&mut grid)?;
        let root_value = &grid[0] - &Rat::one();
        let mut b = AronszajnBuild::empty(support, grid, None);
        let mut order: Vec<&Node> = tree.nodes().collect();
        order.sort_by(|x, y| x.level.cmp(&y.level).then(x.id.cmp(&y.id)));
        let mut index: BTreeMap<u64, NodeId> = BTreeMap::new();
        for n in order {
            let Payload::Seq(seq) = &n.payload else {
                return Err(AronszajnError::Malformed {
                    id: n.id,
                    reason: "no sequence",
                });
            };
            let level = b
                .support
                .binary_search(&n.level)
                .expect("tree levels lie in the support");
            let parent = n.parent.map(|p| index[&p]);
            let value = match seq.sup().finite() {
                Some(v) => v.clone(),
                None if parent.is_none() => root_value.clone(),
                None => {
                    return Err(AronszajnError::Malformed {
                        id: n.id,
                        reason: "empty sequence above the root",
                    })
                }
            };
            let id = b.push(parent, level, Piece::Whole(seq.clone()), value, None);
            index.insert(n.id, id);
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition1Failure {
    pub lower: Ordinal,
    pub node: NodeId,
    pub upper: Ordinal,
    pub q: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition1Report {
    /// `(x, level, q)` triples covered.
    pub pairs: usize,
    pub failure: Option<Condition1Failure>,
}

impl Condition1Report {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    Roots,
    SkippedLevel,
    Duplicate,
    NotIncreasing,
    Length,
    Value,
    Restriction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownwardReport {
    pub checked: usize,
    pub failure: Option<(NodeId, Closure)>,
}

impl DownwardReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberReport {
    pub values: usize,
    pub largest: usize,
    /// `ceil(nodes / values)`.
    pub bound: usize,
    pub comparable: Option<(NodeId, NodeId)>,
    pub covers: bool,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.comparable.is_none() && self.covers && self.largest >= self.bound
    }
}
