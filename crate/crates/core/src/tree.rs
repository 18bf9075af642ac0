//! Finite trees whose levels are ordinals drawn from a finite support.
//!
//! Trees are stored parent-pointer style, so the predecessors of a node
//! form a finite chain and comparability is ancestry. A node's level is a
//! label standing for its height; only the labels in the support are ever
//! materialized. "Materialized levels" in the normality checks are the
//! levels that actually carry nodes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ordinal::Ordinal;
use crate::rat::Rat;
use crate::ratseq::RatSeq;

pub type NodeId = u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("unknown node id {0}")]
    UnknownId(NodeId),
    #[error("node id {0} is used twice")]
    DuplicateId(NodeId),
    #[error("node {id} sits at level {level}, which is not in the support")]
    LevelNotInSupport { id: NodeId, level: Ordinal },
    #[error("node {id} is not above its parent")]
    ParentNotBelow { id: NodeId },
    #[error("more than one root: {0:?}")]
    MultipleRoots(Vec<NodeId>),
    #[error("stage {0} left no nodes")]
    Degenerate(Stage),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Payload {
    #[default]
    None,
    Seq(RatSeq),
    /// Position among siblings, for branch lines.
    Label(Rat),
    /// A closed interval `[a_lower, a_upper]` of some enumerated order.
    Span {
        lower: usize,
        upper: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub level: Ordinal,
    pub payload: Payload,
}

impl Node {
    pub fn new(id: NodeId, parent: Option<NodeId>, level: Ordinal) -> Self {
        Node {
            id,
            parent,
            level,
            payload: Payload::None,
        }
    }

    pub fn with_payload(mut self, payload: Payload) -> Self {
        self.payload = payload;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LeveledTree {
    support: Vec<Ordinal>,
    nodes: BTreeMap<NodeId, Node>,
    declared_height: Option<Ordinal>,
    pre_normal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Antichain {
    Yes,
    /// The first node is an ancestor of the second.
    Comparable(NodeId, NodeId),
}

impl Antichain {
    pub fn holds(&self) -> bool {
        matches!(self, Antichain::Yes)
    }
}

impl LeveledTree {
    /// An empty tree over `support`; a pre-normal tree may have several roots.
    pub fn new(mut support: Vec<Ordinal>, pre_normal: bool) -> Self {
        support.sort();
        support.dedup();
        LeveledTree {
            support,
            nodes: BTreeMap::new(),
            declared_height: None,
            pre_normal,
        }
    }

    /// Builds a tree from nodes given in any order.
    pub fn from_nodes(support: Vec<Ordinal>, nodes: Vec<Node>, pre_normal: bool) -> Result<Self, TreeError> {
        let mut t = LeveledTree::new(support, pre_normal);
        let mut ids = BTreeSet::new();
        for n in &nodes {
            if !ids.insert(n.id) {
                return Err(TreeError::DuplicateId(n.id));
            }
        }
        let mut pending = nodes;
        pending.sort_by(|a, b| a.level.cmp(&b.level).then(a.id.cmp(&b.id)));
        for n in pending {
            t.add_node(n)?;
        }
        Ok(t)
    }

    pub fn add_node(&mut self, node: Node) -> Result<(), TreeError> {
        if self.nodes.contains_key(&node.id) {
            return Err(TreeError::DuplicateId(node.id));
        }
        if self.support.binary_search(&node.level).is_err() {
            return Err(TreeError::LevelNotInSupport {
                id: node.id,
                level: node.level,
            });
        }
        match node.parent {
            Some(p) => {
                let parent = self.nodes.get(&p).ok_or(TreeError::UnknownId(p))?;
                if parent.level >= node.level {
                    return Err(TreeError::ParentNotBelow { id: node.id });
                }
            }
            None if !self.pre_normal => {
                if let Some(r) = self.roots().first() {
                    return Err(TreeError::MultipleRoots(vec![*r, node.id]));
                }
            }
            None => {}
        }
        self.nodes.insert(node.id, node);
        Ok(())
    }

    pub fn support(&self) -> &[Ordinal] {
        &self.support
    }

    pub fn is_pre_normal(&self) -> bool {
        self.pre_normal
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn node(&self, id: NodeId) -> Result<&Node, TreeError> {
        self.nodes.get(&id).ok_or(TreeError::UnknownId(id))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn declared_height(&self) -> Option<&Ordinal> {
        self.declared_height.as_ref()
    }

    pub fn set_declared_height(&mut self, h: Option<Ordinal>) {
        self.declared_height = h;
    }

    pub fn roots(&self) -> Vec<NodeId> {
        self.nodes
            .values()
            .filter(|n| n.parent.is_none())
            .map(|n| n.id)
            .collect()
    }

    /// Children of every node, each list in id order.
    pub fn children(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut out: BTreeMap<NodeId, Vec<NodeId>> = self.nodes.keys().map(|&k| (k, Vec::new())).collect();
        for n in self.nodes.values() {
            if let Some(p) = n.parent {
                out.get_mut(&p).expect("parent present").push(n.id);
            }
        }
        out
    }

    /// Ancestors of `id`, nearest first.
    pub fn ancestors(&self, id: NodeId) -> Ancestors<'_> {
        Ancestors {
            tree: self,
            next: self.nodes.get(&id).and_then(|n| n.parent),
        }
    }

    /// Root-to-node path, the node included.
    pub fn path(&self, id: NodeId) -> Result<Vec<NodeId>, TreeError> {
        self.node(id)?;
        let mut p: Vec<NodeId> = self.ancestors(id).collect();
        p.reverse();
        p.push(id);
        Ok(p)
    }

    pub fn is_ancestor(&self, x: NodeId, y: NodeId) -> bool {
        self.ancestors(y).any(|a| a == x)
    }

    pub fn comparable(&self, x: NodeId, y: NodeId) -> bool {
        x == y || self.is_ancestor(x, y) || self.is_ancestor(y, x)
    }

    /// `id` and everything above it.
    pub fn cone(&self, id: NodeId) -> BTreeSet<NodeId> {
        let children = self.children();
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            if out.insert(x) {
                stack.extend(children.get(&x).into_iter().flatten().copied());
            }
        }
        out
    }

    /// Least ordinal above every level present.
    pub fn height(&self) -> Ordinal {
        self.nodes
            .values()
            .map(|n| &n.level)
            .max()
            .map_or_else(Ordinal::zero, Ordinal::successor)
    }

    /// Levels that carry at least one node, increasing.
    pub fn occupied_levels(&self) -> Vec<Ordinal> {
        let set: BTreeSet<&Ordinal> = self.nodes.values().map(|n| &n.level).collect();
        set.into_iter().cloned().collect()
    }

    pub fn is_antichain(&self, ids: &[NodeId]) -> Result<Antichain, TreeError> {
        let set: BTreeSet<NodeId> = ids.iter().copied().collect();
        for &x in &set {
            self.node(x)?;
        }
        for &y in &set {
            if let Some(x) = self.ancestors(y).find(|a| set.contains(a)) {
                return Ok(Antichain::Comparable(x, y));
            }
        }
        Ok(Antichain::Yes)
    }

    /// The childless nodes: a largest antichain of a finite tree, since every
    /// node lies below some leaf and distinct leaves are incomparable.
    pub fn max_antichain(&self) -> Vec<NodeId> {
        self.children()
            .into_iter()
            .filter(|(_, c)| c.is_empty())
            .map(|(k, _)| k)
            .collect()
    }

    /// Maximal chains, each from a root to a leaf, in depth-first order with
    /// children visited by id.
    pub fn branches(&self) -> Vec<Vec<NodeId>> {
        let children = self.children();
        let mut out = Vec::new();
        let mut stack: Vec<Vec<NodeId>> = self.roots().into_iter().rev().map(|r| vec![r]).collect();
        while let Some(path) = stack.pop() {
            let last = *path.last().expect("nonempty path");
            let kids = &children[&last];
            if kids.is_empty() {
                out.push(path);
                continue;
            }
            for &c in kids.iter().rev() {
                let mut p = path.clone();
                p.push(c);
                stack.push(p);
            }
        }
        out
    }

    /// Levels (as positions in `levels`) reached strictly above each node.
    fn levels_above(&self, levels: &[Ordinal]) -> BTreeMap<NodeId, BTreeSet<usize>> {
        let pos = |l: &Ordinal| levels.binary_search(l).expect("occupied level");
        let mut order: Vec<&Node> = self.nodes.values().collect();
        order.sort_by(|a, b| b.level.cmp(&a.level));
        let mut out: BTreeMap<NodeId, BTreeSet<usize>> = BTreeMap::new();
        for n in order {
            let mine = out.remove(&n.id).unwrap_or_default();
            if let Some(p) = n.parent {
                let entry = out.entry(p).or_default();
                entry.insert(pos(&n.level));
                entry.extend(mine.iter().copied());
            }
            out.insert(n.id, mine);
        }
        out
    }

    /// Evaluates the six finitized normality properties.
    pub fn check_normal(&self, succ_width: usize) -> NormalReport {
        let levels = self.occupied_levels();
        let children = self.children();
        let height = self.height();
        let p1 = match &self.declared_height {
            Some(d) if *d != height => Err(Violation::Height {
                declared: d.clone(),
                actual: height,
            }),
            _ => Ok(()),
        };
        let roots = self.roots();
        let p2 = if roots.len() == 1 {
            Ok(())
        } else {
            Err(Violation::Roots(roots))
        };
        let sizes = levels
            .iter()
            .map(|l| (l.clone(), self.nodes.values().filter(|n| &n.level == l).count()))
            .collect();
        let p4 = self.check_successors(&levels, &children, succ_width);
        let p5 = self.check_upward(&levels);
        let p6 = self.check_limits();
        NormalReport {
            results: [p1, p2, Ok(()), p4, p5, p6],
            level_sizes: sizes,
        }
    }

    /// Successors are only counted where the level right above a node is
    /// materialized; across a gap in the support there is nothing to count.
    fn check_successors(
        &self,
        levels: &[Ordinal],
        children: &BTreeMap<NodeId, Vec<NodeId>>,
        succ_width: usize,
    ) -> Result<(), Violation> {
        for n in self.nodes.values() {
            let kids = &children[&n.id];
            if kids.is_empty() {
                continue;
            }
            let next = levels.iter().find(|l| **l > n.level).expect("a child is higher");
            if *next != n.level.successor() {
                continue;
            }
            let found = kids.iter().filter(|c| &self.nodes[c].level == next).count();
            if found < succ_width {
                return Err(Violation::FewSuccessors {
                    id: n.id,
                    level: next.clone(),
                    found,
                });
            }
        }
        Ok(())
    }

    fn check_upward(&self, levels: &[Ordinal]) -> Result<(), Violation> {
        let above = self.levels_above(levels);
        for n in self.nodes.values() {
            let start = levels.binary_search(&n.level).expect("occupied") + 1;
            if let Some(k) = (start..levels.len()).find(|k| !above[&n.id].contains(k)) {
                return Err(Violation::NoDescendantAt {
                    id: n.id,
                    level: levels[k].clone(),
                });
            }
        }
        Ok(())
    }

    fn check_limits(&self) -> Result<(), Violation> {
        match self.limit_duplicates().first() {
            None => Ok(()),
            Some((level, _, ids)) => Err(Violation::SamePredecessors {
                first: ids[0],
                second: ids[1],
                level: level.clone(),
            }),
        }
    }

    /// Groups of at least two nodes at a limit level with a common parent,
    /// by increasing level then parent.
    fn limit_duplicates(&self) -> Vec<(Ordinal, Option<NodeId>, Vec<NodeId>)> {
        let mut groups: BTreeMap<(Ordinal, Option<NodeId>), Vec<NodeId>> = BTreeMap::new();
        for n in self.nodes.values().filter(|n| n.level.is_limit()) {
            groups.entry((n.level.clone(), n.parent)).or_default().push(n.id);
        }
        groups
            .into_iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|((l, p), v)| (l, p, v))
            .collect()
    }

    /// Removes `gone` and hangs their children on the nearest surviving
    /// ancestor.
    fn splice_out(&mut self, gone: &BTreeSet<NodeId>) {
        let mut lift: BTreeMap<NodeId, Option<NodeId>> = BTreeMap::new();
        for &g in gone {
            let target = self.ancestors(g).find(|a| !gone.contains(a));
            lift.insert(g, target);
        }
        for g in gone {
            self.nodes.remove(g);
        }
        for n in self.nodes.values_mut() {
            if let Some(p) = n.parent {
                if let Some(t) = lift.get(&p) {
                    n.parent = *t;
                }
            }
        }
    }

    fn remove_cones(&mut self, tops: &[NodeId]) -> Vec<NodeId> {
        let mut gone = BTreeSet::new();
        for &t in tops {
            if !gone.contains(&t) {
                gone.extend(self.cone(t));
            }
        }
        for g in &gone {
            self.nodes.remove(g);
        }
        gone.into_iter().collect()
    }

    fn fresh_glue_id(&self, chain: &[NodeId], level: &Ordinal) -> NodeId {
        let mut h = Fnv::new();
        for id in chain {
            h.write(&id.to_le_bytes());
        }
        h.write(&[0xff]);
        h.write(alloc::format!("{level}").as_bytes());
        let mut id = h.finish();
        while self.nodes.contains_key(&id) {
            h.write(&[0x5a]);
            id = h.finish();
        }
        id
    }
}

pub struct Ancestors<'a> {
    tree: &'a LeveledTree,
    next: Option<NodeId>,
}

impl Iterator for Ancestors<'_> {
    type Item = NodeId;
    fn next(&mut self) -> Option<NodeId> {
        let cur = self.next?;
        self.next = self.tree.nodes.get(&cur).and_then(|n| n.parent);
        Some(cur)
    }
}

/// 64-bit FNV-1a, for stable glue node ids.
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Height {
        declared: Ordinal,
        actual: Ordinal,
    },
    Roots(Vec<NodeId>),
    FewSuccessors {
        id: NodeId,
        level: Ordinal,
        found: usize,
    },
    NoDescendantAt {
        id: NodeId,
        level: Ordinal,
    },
    SamePredecessors {
        first: NodeId,
        second: NodeId,
        level: Ordinal,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Height { declared, actual } => {
                write!(f, "declared height {declared}, actual {actual}")
            }
            Violation::Roots(r) => write!(f, "roots {r:?}"),
            Violation::FewSuccessors { id, level, found } => {
                write!(f, "node {id} has {found} successors at level {level}")
            }
            Violation::NoDescendantAt { id, level } => {
                write!(f, "node {id} has nothing above it at level {level}")
            }
            Violation::SamePredecessors { first, second, level } => {
                write!(
                    f,
                    "nodes {first} and {second} at level {level} share their predecessors"
                )
            }
        }
    }
}

/// Results for the normality properties, numbered from 1: height, unique
/// root, finite levels, successor width, upward extension, limit
/// uniqueness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalReport {
    pub results: [Result<(), Violation>; 6],
    pub level_sizes: Vec<(Ordinal, usize)>,
}

impl NormalReport {
    /// Property `k`, counting from 1.
    pub fn passes(&self, k: usize) -> bool {
        self.results[k - 1].is_ok()
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(Result::is_ok)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageEntry {
    pub pass: usize,
    pub stage: Stage,
    pub removed: Vec<NodeId>,
    pub added: Vec<NodeId>,
    pub note: String,
}

/// Runs the five stages in order, repeating whole passes until one changes
/// nothing. Each stage is the identity when its target property already
/// holds:
///
/// * T1 removes the cone of every node lacking a descendant at some higher
///   materialized level;
/// * T2 merges siblings at a limit level into one glue node;
/// * T3, when some node has fewer than `succ_width` successors, removes
///   nodes whose only child sits at the next level up;
/// * T4, when some node has fewer than `succ_width` successors, keeps only
///   nodes at limit levels and at level 0;
/// * T5 keeps the cone of the least root (least level, then least id).
///
/// Only entries for stages that changed something are logged.
pub fn normalize(t: &LeveledTree, succ_width: usize) -> Result<(LeveledTree, Vec<StageEntry>), TreeError> {
    let mut tree = t.clone();
    tree.pre_normal = true;
    let mut log = Vec::new();
    if tree.is_empty() {
        return Err(TreeError::Degenerate(Stage::T1));
    }
    for pass in 0.. {
        let before = log.len();
        stage_prune(&mut tree, pass, &mut log)?;
        stage_glue(&mut tree, pass, &mut log);
        stage_branching(&mut tree, succ_width, pass, &mut log);
        stage_limits(&mut tree, succ_width, pass, &mut log)?;
        stage_root(&mut tree, pass, &mut log);
        if log.len() == before {
            break;
        }
    }
    if log.is_empty() {
        return Ok((t.clone(), log));
    }
    tree.pre_normal = tree.roots().len() > 1;
    tree.declared_height = Some(tree.height());
    Ok((tree, log))
}

fn stage_prune(tree: &mut LeveledTree, pass: usize, log: &mut Vec<StageEntry>) -> Result<(), TreeError> {
    let mut removed = Vec::new();
    loop {
        let levels = tree.occupied_levels();
        let above = tree.levels_above(&levels);
        let failing: Vec<NodeId> = tree
            .nodes
            .values()
            .filter(|n| {
                let start = levels.binary_search(&n.level).expect("occupied") + 1;
                (start..levels.len()).any(|k| !above[&n.id].contains(&k))
            })
            .map(|n| n.id)
            .collect();
        if failing.is_empty() {
            break;
        }
        removed.extend(tree.remove_cones(&failing));
    }
    if tree.is_empty() {
        return Err(TreeError::Degenerate(Stage::T1));
    }
    if !removed.is_empty() {
        removed.sort_unstable();
        log.push(StageEntry {
            pass,
            stage: Stage::T1,
            removed,
            added: Vec::new(),
            note: String::from("cones without a descendant at every higher level"),
        });
    }
    Ok(())
}

fn stage_glue(tree: &mut LeveledTree, pass: usize, log: &mut Vec<StageEntry>) {
    let (mut removed, mut added) = (Vec::new(), Vec::new());
    loop {
        let Some((level, parent, group)) = tree.limit_duplicates().into_iter().next() else {
            break;
        };
        let chain = match parent {
            Some(p) => tree.path(p).expect("parent present"),
            None => Vec::new(),
        };
        let glue = tree.fresh_glue_id(&chain, &level);
        for n in tree.nodes.values_mut() {
            if n.parent.is_some_and(|p| group.contains(&p)) {
                n.parent = Some(glue);
            }
        }
        for g in &group {
            tree.nodes.remove(g);
        }
        tree.nodes.insert(glue, Node::new(glue, parent, level));
        removed.extend(group);
        added.push(glue);
    }
    if !added.is_empty() {
        removed.sort_unstable();
        log.push(StageEntry {
            pass,
            stage: Stage::T2,
            removed,
            added,
            note: String::from("siblings at limit levels glued"),
        });
    }
}

fn stage_branching(tree: &mut LeveledTree, succ_width: usize, pass: usize, log: &mut Vec<StageEntry>) {
    let levels = tree.occupied_levels();
    let children = tree.children();
    if tree.check_successors(&levels, &children, succ_width).is_ok() {
        return;
    }
    let gone: BTreeSet<NodeId> = children
        .into_iter()
        .filter(|(k, c)| c.len() == 1 && tree.nodes[&c[0]].level == tree.nodes[k].level.successor())
        .map(|(k, _)| k)
        .collect();
    if gone.is_empty() {
        return;
    }
    tree.splice_out(&gone);
    log.push(StageEntry {
        pass,
        stage: Stage::T3,
        removed: gone.into_iter().collect(),
        added: Vec::new(),
        note: String::from("non-branching nodes"),
    });
}

fn stage_limits(
    tree: &mut LeveledTree,
    succ_width: usize,
    pass: usize,
    log: &mut Vec<StageEntry>,
) -> Result<(), TreeError> {
    let levels = tree.occupied_levels();
    if tree.check_successors(&levels, &tree.children(), succ_width).is_ok() {
        return Ok(());
    }
    let gone: BTreeSet<NodeId> = tree
        .nodes
        .values()
        .filter(|n| !(n.level.is_zero() || n.level.is_limit()))
        .map(|n| n.id)
        .collect();
    if gone.is_empty() {
        return Ok(());
    }
    tree.splice_out(&gone);
    if tree.is_empty() {
        return Err(TreeError::Degenerate(Stage::T4));
    }
    log.push(StageEntry {
        pass,
        stage: Stage::T4,
        removed: gone.into_iter().collect(),
        added: Vec::new(),
        note: String::from("kept limit levels and level 0"),
    });
    Ok(())
}

fn stage_root(tree: &mut LeveledTree, pass: usize, log: &mut Vec<StageEntry>) {
    let roots = tree.roots();
    if roots.len() < 2 {
        return;
    }
    let keep = *roots
        .iter()
        .min_by(|a, b| tree.nodes[a].level.cmp(&tree.nodes[b].level).then(a.cmp(b)))
        .expect("roots");
    let others: Vec<NodeId> = roots.into_iter().filter(|&r| r != keep).collect();
    let removed = tree.remove_cones(&others);
    log.push(StageEntry {
        pass,
        stage: Stage::T5,
        removed,
        added: Vec::new(),
        note: alloc::format!("kept the cone of {keep}"),
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn sup(levels: &[&str]) -> Vec<Ordinal> {
        levels.iter().map(|s| o(s)).collect()
    }

    fn tree(levels: &[&str], edges: &[(NodeId, Option<NodeId>, &str)]) -> LeveledTree {
        let nodes = edges.iter().map(|&(id, p, l)| Node::new(id, p, o(l))).collect();
        LeveledTree::from_nodes(sup(levels), nodes, true).unwrap()
    }

    fn binary(depth: u32) -> LeveledTree {
        let levels: Vec<String> = (0..=depth).map(|d| alloc::format!("{d}")).collect();
        let level_refs: Vec<&str> = levels.iter().map(String::as_str).collect();
        let mut t = LeveledTree::new(sup(&level_refs), false);
        t.add_node(Node::new(1, None, o("0"))).unwrap();
        for id in 2..(1u64 << (depth + 1)) {
            let d = 63 - id.leading_zeros();
            t.add_node(Node::new(id, Some(id / 2), Ordinal::natural(d))).unwrap();
        }
        t
    }

    #[test]
    fn height_examples() {
        assert_eq!(tree(&["0"], &[(0, None, "0")]).height(), o("1"));
        assert_eq!(
            tree(&["0", "w"], &[(0, None, "0"), (1, Some(0), "w")]).height(),
            o("w+1")
        );
        assert_eq!(LeveledTree::new(sup(&["0"]), false).height(), o("0"));
    }

    #[test]
    fn validation() {
        let mut t = LeveledTree::new(sup(&["0", "1"]), false);
        t.add_node(Node::new(0, None, o("0"))).unwrap();
        assert_eq!(
            t.add_node(Node::new(1, None, o("0"))),
            Err(TreeError::MultipleRoots(vec![0, 1]))
        );
        assert!(matches!(
            t.add_node(Node::new(2, Some(0), o("0"))),
            Err(TreeError::ParentNotBelow { .. })
        ));
        assert!(matches!(
            t.add_node(Node::new(3, Some(0), o("2"))),
            Err(TreeError::LevelNotInSupport { .. })
        ));
        assert_eq!(
            t.add_node(Node::new(0, Some(0), o("1"))),
            Err(TreeError::DuplicateId(0))
        );
    }

    #[test]
    fn antichain_examples() {
        let t = binary(2);
        assert_eq!(t.is_antichain(&[2, 3]).unwrap(), Antichain::Yes);
        assert_eq!(t.is_antichain(&[1, 5]).unwrap(), Antichain::Comparable(1, 5));
        assert_eq!(t.is_antichain(&[]).unwrap(), Antichain::Yes);
        assert_eq!(t.is_antichain(&[99]), Err(TreeError::UnknownId(99)));
    }

    #[test]
    fn max_antichain_examples() {
        let path = tree(
            &["0", "1", "2", "3", "4"],
            &[
                (0, None, "0"),
                (1, Some(0), "1"),
                (2, Some(1), "2"),
                (3, Some(2), "3"),
                (4, Some(3), "4"),
            ],
        );
        assert_eq!(path.max_antichain(), [4]);
        assert_eq!(binary(3).max_antichain().len(), 8);
        let star = tree(
            &["0", "1"],
            &[(0, None, "0"), (1, Some(0), "1"), (2, Some(0), "1"), (3, Some(0), "1")],
        );
        assert_eq!(star.max_antichain(), [1, 2, 3]);
    }

    #[test]
    fn check_normal_examples() {
        let t = binary(2);
        let r = t.check_normal(2);
        assert!(r.all_pass(), "{r:?}");

        let forest = tree(&["0"], &[(0, None, "0"), (1, None, "0")]);
        assert_eq!(forest.check_normal(2).results[1], Err(Violation::Roots(vec![0, 1])));

        let gap = tree(
            &["0", "1", "w"],
            &[(0, None, "0"), (1, Some(0), "1"), (2, None, "0"), (3, Some(2), "w")],
        );
        let r = gap.check_normal(1);
        assert!(matches!(r.results[4], Err(Violation::NoDescendantAt { id: 0, .. })));
    }

    #[test]
    fn normal_input_is_a_fixed_point() {
        let t = binary(3);
        let (out, log) = normalize(&t, 2).unwrap();
        assert!(log.is_empty());
        assert_eq!(out, t);
    }

    #[test]
    fn path_reduces_to_its_top() {
        let path = tree(
            &["0", "1", "2", "3"],
            &[(0, None, "0"), (1, Some(0), "1"), (2, Some(1), "2"), (3, Some(2), "3")],
        );
        let (out, log) = normalize(&path, 2).unwrap();
        assert_eq!(out.nodes().map(|n| n.id).collect::<Vec<_>>(), [3]);
        assert_eq!(log[0].stage, Stage::T3);
        assert_eq!(log[0].removed, [0, 1, 2]);
    }

    #[test]
    fn degenerate_when_limit_selection_empties() {
        // root with one child that branches twice; width 3 cannot be met
        let t = tree(
            &["0", "1", "2"],
            &[(0, None, "0"), (1, Some(0), "1"), (2, Some(1), "2"), (3, Some(1), "2")],
        );
        assert_eq!(normalize(&t, 3), Err(TreeError::Degenerate(Stage::T4)));
    }

    #[test]
    fn glue_restores_limit_uniqueness() {
        let t = tree(
            &["0", "1", "w", "w+1"],
            &[
                (0, None, "0"),
                (1, Some(0), "1"),
                (2, Some(0), "1"),
                (3, Some(1), "w"),
                (4, Some(1), "w"),
                (5, Some(3), "w+1"),
                (6, Some(4), "w+1"),
                (7, Some(2), "w"),
                (8, Some(7), "w+1"),
                (9, Some(7), "w+1"),
            ],
        );
        assert!(!t.check_normal(2).passes(6));
        let (out, log) = normalize(&t, 2).unwrap();
        let r = out.check_normal(2);
        assert!(r.passes(2) && r.passes(5) && r.passes(6), "{r:?}");
        assert!(log.iter().any(|e| e.stage == Stage::T2));
        let (again, log2) = normalize(&out, 2).unwrap();
        assert!(log2.is_empty());
        assert_eq!(again, out);
    }

    #[test]
    fn glue_ids_are_stable() {
        let t = tree(&["0", "w"], &[(0, None, "0"), (1, Some(0), "w"), (2, Some(0), "w")]);
        let (a, _) = normalize(&t, 1).unwrap();
        let (b, _) = normalize(&t, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_child_across_a_gap_is_normal() {
        let t = tree(
            &["0", "1", "w", "w+1"],
            &[
                (0, None, "0"),
                (1, Some(0), "1"),
                (2, Some(0), "1"),
                (3, Some(1), "w"),
                (4, Some(2), "w"),
                (5, Some(3), "w+1"),
                (6, Some(3), "w+1"),
                (7, Some(4), "w+1"),
                (8, Some(4), "w+1"),
            ],
        );
        assert!(t.check_normal(2).all_pass());
        let (out, log) = normalize(&t, 2).unwrap();
        assert!(log.is_empty());
        assert_eq!(out, t);
    }

    #[test]
    fn branches_are_root_to_leaf() {
        let t = binary(2);
        assert_eq!(
            t.branches(),
            [vec![1, 2, 4], vec![1, 2, 5], vec![1, 3, 6], vec![1, 3, 7]]
        );
    }
}
