//! JSON file formats. Ordinals and rationals are strings (`"w*2+1"`,
//! `"-3/4"`) so nothing is lost to floating point.

use orderbench_core::backforth::{Direction, Step};
use orderbench_core::order::{check_axioms, AxiomReport, FiniteOrder};
use orderbench_core::ratseq::{RatSeq, Segment};
use orderbench_core::suslin::{tree_to_line, BranchLine};
use orderbench_core::tree::{LeveledTree, Node, Payload};
use orderbench_core::{Ordinal, Rat};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("bad ordinal {0:?}")]
    Ordinal(String),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("bad fill length {0:?}: expected w or w^e")]
    FillLength(String),
    #[error("sequence: {0}")]
    Seq(#[from] orderbench_core::ratseq::RatSeqError),
    #[error("tree: {0}")]
    Tree(#[from] orderbench_core::tree::TreeError),
    #[error("line: {0}")]
    Line(#[from] orderbench_core::suslin::SuslinError),
    #[error("pair {0} refers to a missing element")]
    Pair(usize),
    #[error("not a strict total order: {0}")]
    NotAnOrder(String),
    #[error("relation {0:?} is neither \"<\" nor \">\"")]
    Relation(String),
    #[error("node {0} carries more than one payload")]
    Payload(u64),
    #[error("listed branches do not match the tree")]
    Branches,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn ordinal(s: &str) -> Result<Ordinal, FormatError> {
    s.parse().map_err(|_| FormatError::Ordinal(s.to_string()))
}

pub fn rational(s: &str) -> Result<Rat, FormatError> {
    s.parse().map_err(|_| FormatError::Rational(s.to_string()))
}

/// Comma-separated list, as taken by `--support` and `--grid`.
pub fn list<T>(s: &str, one: impl Fn(&str) -> Result<T, FormatError>) -> Result<Vec<T>, FormatError> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(one).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentJson {
    Atom(String),
    Fill { len: String, lo: String, hi: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatSeqJson {
    pub segments: Vec<SegmentJson>,
}

impl From<&RatSeq> for RatSeqJson {
    fn from(s: &RatSeq) -> Self {
        let segments = s
            .segments()
            .iter()
            .map(|seg| match seg {
                Segment::Atom(r) => SegmentJson::Atom(r.to_string()),
                Segment::Fill { exponent, lo, hi } => SegmentJson::Fill {
                    len: Ordinal::omega_pow(*exponent).to_string(),
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                },
            })
            .collect();
        RatSeqJson { segments }
    }
}

impl RatSeqJson {
    pub fn to_seq(&self) -> Result<RatSeq, FormatError> {
        let mut segs = Vec::new();
        for s in &self.segments {
            segs.push(match s {
                SegmentJson::Atom(r) => Segment::Atom(rational(r)?),
                SegmentJson::Fill { len, lo, hi } => {
                    let o = ordinal(len)?;
                    let exponent = match o.terms() {
                        [t] if t.coefficient == 1u32.into() && t.exponent > 0 => t.exponent,
                        _ => return Err(FormatError::FillLength(len.clone())),
                    };
                    Segment::Fill {
                        exponent,
                        lo: rational(lo)?,
                        hi: rational(hi)?,
                    }
                }
            });
        }
        Ok(RatSeq::from_segments(segs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: u64,
    pub parent: Option<u64>,
    pub level: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<RatSeqJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub support: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_height: Option<String>,
    #[serde(default)]
    pub pre_normal: bool,
    /// Present on Aronszajn builds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<String>>,
    pub nodes: Vec<NodeJson>,
}

impl TreeJson {
    pub fn from_tree(t: &LeveledTree, grid: Option<&[Rat]>) -> Self {
        let nodes = t
            .nodes()
            .map(|n| {
                let mut j = NodeJson {
                    id: n.id,
                    parent: n.parent,
                    level: n.level.to_string(),
                    seq: None,
                    label: None,
                    span: None,
                };
                match &n.payload {
                    Payload::None => {}
                    Payload::Seq(s) => j.seq = Some(s.into()),
                    Payload::Label(r) => j.label = Some(r.to_string()),
                    Payload::Span { lower, upper } => j.span = Some([*lower, *upper]),
                }
                j
            })
            .collect();
        TreeJson {
            support: t.support().iter().map(ToString::to_string).collect(),
            declared_height: t.declared_height().map(ToString::to_string),
            pre_normal: t.is_pre_normal(),
            grid: grid.map(|g| g.iter().map(ToString::to_string).collect()),
            nodes,
        }
    }

    pub fn to_tree(&self) -> Result<LeveledTree, FormatError> {
        let support = self.support.iter().map(|s| ordinal(s)).collect::<Result<Vec<_>, _>>()?;
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let given = [n.seq.is_some(), n.label.is_some(), n.span.is_some()];
            if given.iter().filter(|&&b| b).count() > 1 {
                return Err(FormatError::Payload(n.id));
            }
            let payload = if let Some(s) = &n.seq {
                Payload::Seq(s.to_seq()?)
            } else if let Some(l) = &n.label {
                Payload::Label(rational(l)?)
            } else if let Some([lower, upper]) = n.span {
                Payload::Span { lower, upper }
            } else {
                Payload::None
            };
            nodes.push(Node::new(n.id, n.parent, ordinal(&n.level)?).with_payload(payload));
        }
        let mut t = LeveledTree::from_nodes(support, nodes, self.pre_normal)?;
        t.set_declared_height(self.declared_height.as_deref().map(ordinal).transpose()?);
        Ok(t)
    }

    pub fn grid(&self) -> Result<Option<Vec<Rat>>, FormatError> {
        self.grid
            .as_ref()
            .map(|g| g.iter().map(|s| rational(s)).collect())
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    pub nodes: Vec<u64>,
    /// Sibling label of each node; `null` where a node has no siblings.
    pub labels: Vec<Option<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineJson {
    pub tree: TreeJson,
    /// In increasing order.
    pub branches: Vec<BranchJson>,
}

impl From<&BranchLine> for LineJson {
    fn from(line: &BranchLine) -> Self {
        let branches = line
            .branches()
            .iter()
            .map(|b| BranchJson {
                nodes: b.clone(),
                labels: b.iter().map(|&id| line.label(id).map(ToString::to_string)).collect(),
            })
            .collect();
        LineJson {
            tree: TreeJson::from_tree(line.tree(), None),
            branches,
        }
    }
}

impl LineJson {
    /// Rebuilds the line from the tree and checks the listed branches.
    pub fn to_line(&self) -> Result<BranchLine, FormatError> {
        let line = tree_to_line(&self.tree.to_tree()?)?;
        if LineJson::from(&line).branches != self.branches {
            return Err(FormatError::Branches);
        }
        Ok(line)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteOrderJson {
    pub elements: Vec<String>,
    pub pairs: Vec<(usize, usize, String)>,
}

impl From<&FiniteOrder> for FiniteOrderJson {
    fn from(f: &FiniteOrder) -> Self {
        FiniteOrderJson {
            elements: f.names().to_vec(),
            pairs: f.pairs().into_iter().map(|(i, j)| (i, j, "<".to_string())).collect(),
        }
    }
}

impl FiniteOrderJson {
    /// The transitive closure of the listed pairs, which must be a strict
    /// total order on the elements.
    pub fn to_order(&self) -> Result<FiniteOrder, FormatError> {
        let n = self.elements.len();
        let mut less = vec![vec![false; n]; n];
        for (i, j, rel) in &self.pairs {
            let (a, b) = match rel.as_str() {
                "<" => (*i, *j),
                ">" => (*j, *i),
                _ => return Err(FormatError::Relation(rel.clone())),
            };
            if a >= n || b >= n {
                return Err(FormatError::Pair(a.max(b)));
            }
            less[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        less[i][j] |= less[k][j];
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| less[i][j])
            .collect();
        let order = FiniteOrder::from_pairs(self.elements.clone(), &pairs).map_err(FormatError::Pair)?;
        match check_axioms(&order, n) {
            AxiomReport::Pass => Ok(order),
            AxiomReport::Violation(v) => Err(FormatError::NotAnOrder(format!("{v:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub round: usize,
    pub dir: String,
    pub source_index: usize,
    pub target_index: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
}

pub fn transcript_json(steps: &[Step]) -> Vec<StepJson> {
    steps
        .iter()
        .map(|s| StepJson {
            round: s.round,
            dir: s.dir.to_string(),
            source_index: s.source,
            target_index: s.target,
            skipped: s.skipped,
        })
        .collect()
}

pub fn transcript_steps(json: &[StepJson]) -> Result<Vec<Step>, FormatError> {
    json.iter()
        .map(|s| {
            let dir = match s.dir.as_str() {
                "forward" => Direction::Forward,
                "backward" => Direction::Backward,
                other => return Err(FormatError::Relation(other.to_string())),
            };
            Ok(Step {
                round: s.round,
                dir,
                source: s.source_index,
                target: s.target_index,
                skipped: s.skipped,
            })
        })
        .collect()
}
