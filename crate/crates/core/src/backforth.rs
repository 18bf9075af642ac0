//! Back-and-forth between countable dense orders, embedding a countable
//! order into `Q`, and extending an isomorphism to cuts.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::order::{cmp, search_limit, Cut, EnumeratedOrder, OrderError, Requirement};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BackForthError {
    #[error("round {round}: no admissible index below {budget}")]
    ExtensionStuck { round: usize, budget: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("transcript step {0} conflicts with the map built so far")]
    BadTranscript(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// One round. For a forward round `source` indexes `A` and `target`
/// indexes `B`; a backward round is the other way round. A skipped round
/// found its source already mapped and records the existing partner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub round: usize,
    pub dir: Direction,
    pub source: usize,
    pub target: usize,
    pub skipped: bool,
}

/// A finite order-preserving injection from indices of `A` to indices of
/// `B`, with the transcript that produced it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialIso {
    forward: BTreeMap<usize, usize>,
    backward: BTreeMap<usize, usize>,
    /// Domain in increasing `A` order.
    chain: Vec<(usize, usize)>,
    transcript: Vec<Step>,
}

impl PartialIso {
    pub fn new() -> Self {
        PartialIso::default()
    }

    pub fn get(&self, a: usize) -> Option<usize> {
        self.forward.get(&a).copied()
    }

    pub fn preimage(&self, b: usize) -> Option<usize> {
        self.backward.get(&b).copied()
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward.iter().map(|(&a, &b)| (a, b))
    }

    pub fn transcript(&self) -> &[Step] {
        &self.transcript
    }

    /// Rebuilds the map recorded in a transcript, ordering its domain by `a`.
    pub fn from_transcript<A: EnumeratedOrder + ?Sized>(a: &A, steps: &[Step]) -> Result<Self, BackForthError> {
        let mut iso = PartialIso::new();
        for (k, s) in steps.iter().enumerate() {
            let (x, y) = match s.dir {
                Direction::Forward => (s.source, s.target),
                Direction::Backward => (s.target, s.source),
            };
            match (iso.get(x), iso.preimage(y)) {
                (None, None) if !s.skipped => {
                    let at = iso.slot(a, x)?;
                    iso.insert(at, x, y);
                }
                (Some(y2), Some(x2)) if s.skipped && y2 == y && x2 == x => {}
                _ => return Err(BackForthError::BadTranscript(k)),
            }
            iso.transcript.push(s.clone());
        }
        Ok(iso)
    }

    /// Checks injectivity and order preservation on every pair of the
    /// domain. Returns the first offending pair of `A` indices.
    pub fn verify<A, B>(&self, a: &A, b: &B) -> Result<Option<(usize, usize)>, OrderError>
    where
        A: EnumeratedOrder + ?Sized,
        B: EnumeratedOrder + ?Sized,
    {
        if self.forward.len() != self.backward.len() {
            return Ok(self.forward.keys().next().map(|&k| (k, k)));
        }
        let pairs: Vec<(usize, usize)> = self.pairs().collect();
        for (x, &(i, fi)) in pairs.iter().enumerate() {
            for &(j, fj) in &pairs[x + 1..] {
                if cmp(a, i, j)? != cmp(b, fi, fj)? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Position of `a_i` among the chain, found by binary search in `A`.
    fn slot<A: EnumeratedOrder + ?Sized>(&self, a: &A, i: usize) -> Result<usize, OrderError> {
        let (mut lo, mut hi) = (0, self.chain.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if cmp(a, self.chain[mid].0, i)? == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Same as [`slot`](Self::slot) but searching by image in `B`.
    fn slot_by_image<B: EnumeratedOrder + ?Sized>(&self, b: &B, j: usize) -> Result<usize, OrderError> {
        let (mut lo, mut hi) = (0, self.chain.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if cmp(b, self.chain[mid].1, j)? == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    fn insert(&mut self, at: usize, a: usize, b: usize) {
        self.forward.insert(a, b);
        self.backward.insert(b, a);
        self.chain.insert(at, (a, b));
    }
}

/// Least index `m < budget` of `order` strictly between the given chain
/// neighbours and not already used.
fn least_between<P: EnumeratedOrder + ?Sized>(
    order: &P,
    below: Option<usize>,
    above: Option<usize>,
    used: &BTreeMap<usize, usize>,
    budget: usize,
) -> Result<Option<usize>, OrderError> {
    for m in 0..search_limit(order, budget) {
        if used.contains_key(&m) {
            continue;
        }
        if let Some(l) = below {
            if cmp(order, l, m)? != Ordering::Less {
                continue;
            }
        }
        if let Some(u) = above {
            if cmp(order, m, u)? != Ordering::Less {
                continue;
            }
        }
        return Ok(Some(m));
    }
    Ok(None)
}

/// Cantor's back-and-forth for `rounds` rounds.
///
/// Round `2i` maps `a_i` to the least-indexed admissible element of `B`;
/// round `2i + 1` pulls `b_i` back to the least-indexed admissible element
/// of `A`. A round whose element is already mapped is recorded as skipped.
pub fn back_and_forth<A, B>(a: &A, b: &B, rounds: usize, budget: usize) -> Result<PartialIso, BackForthError>
where
    A: EnumeratedOrder + ?Sized,
    B: EnumeratedOrder + ?Sized,
{
    let mut iso = PartialIso::new();
    for round in 0..rounds {
        let i = round / 2;
        let dir = if round % 2 == 0 {
            Direction::Forward
        } else {
            Direction::Backward
        };
        let (src_len, existing) = match dir {
            Direction::Forward => (a.len(), iso.get(i)),
            Direction::Backward => (b.len(), iso.preimage(i)),
        };
        if src_len.is_some_and(|n| i >= n) {
            continue;
        }
        if let Some(t) = existing {
            iso.transcript.push(Step {
                round,
                dir,
                source: i,
                target: t,
                skipped: true,
            });
            continue;
        }
        let found = match dir {
            Direction::Forward => {
                let at = iso.slot(a, i)?;
                let below = at.checked_sub(1).map(|k| iso.chain[k].1);
                let above = iso.chain.get(at).map(|c| c.1);
                least_between(b, below, above, &iso.backward, budget)?.map(|m| (at, i, m))
            }
            Direction::Backward => {
                let at = iso.slot_by_image(b, i)?;
                let below = at.checked_sub(1).map(|k| iso.chain[k].0);
                let above = iso.chain.get(at).map(|c| c.0);
                least_between(a, below, above, &iso.forward, budget)?.map(|m| (at, m, i))
            }
        };
        let Some((at, x, y)) = found else {
            return Err(BackForthError::ExtensionStuck { round, budget });
        };
        iso.insert(at, x, y);
        let (source, target) = match dir {
            Direction::Forward => (x, y),
            Direction::Backward => (y, x),
        };
        iso.transcript.push(Step {
            round,
            dir,
            source,
            target,
            skipped: false,
        });
    }
    Ok(iso)
}

/// Order-embeds the first `n` elements of `a` into `Q`, in enumeration
/// order: the first element goes to 0, an element above everything placed
/// so far to the maximum plus one, one below everything to the minimum
/// minus one, and anything else to the midpoint of its gap.
pub fn embed_into_rationals<A: EnumeratedOrder + ?Sized>(a: &A, n: usize) -> Result<Vec<Rat>, OrderError> {
    let n = search_limit(a, n);
    let mut values: Vec<Rat> = Vec::with_capacity(n);
    // Indices placed so far, in increasing order of `a`.
    let mut sorted: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let (mut lo, mut hi) = (0, sorted.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if cmp(a, sorted[mid], i)? == Ordering::Less {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let below = lo.checked_sub(1).map(|k| &values[sorted[k]]);
        let above = sorted.get(lo).map(|&k| &values[k]);
        let q = match (below, above) {
            (None, None) => Rat::zero(),
            (Some(x), None) => x + &Rat::one(),
            (None, Some(y)) => y - &Rat::one(),
            (Some(x), Some(y)) => x.midpoint(y),
        };
        values.push(q);
        sorted.insert(lo, i);
    }
    Ok(values)
}

/// A map from indices of one order to indices of another, possibly
/// defined only on part of the first.
pub trait IsoRule {
    fn image(&self, i: usize) -> Option<usize>;
}

impl IsoRule for PartialIso {
    fn image(&self, i: usize) -> Option<usize> {
        self.get(i)
    }
}

/// Adapts a closure into an [`IsoRule`].
pub struct FnRule<F>(pub F);

impl<F: Fn(usize) -> Option<usize>> IsoRule for FnRule<F> {
    fn image(&self, i: usize) -> Option<usize> {
        (self.0)(i)
    }
}

/// `I*(x) = sup { I(p) : p in x }`, as a cut over the target order.
///
/// Membership of `q` is settled by the first `p < budget` where `I` is
/// defined and that either lies in `x` with `I(p) >= q` (member) or lies
/// outside `x` with `I(p) <= q` (not a member: everything in `x` is below
/// `p`, so its image is below `q`).
pub struct ExtendedCut<'a, T: ?Sized, I: ?Sized, X: ?Sized> {
    target: &'a T,
    iso: &'a I,
    cut: &'a X,
    budget: usize,
}

pub fn extend_to_completion<'a, T, I, X>(
    target: &'a T,
    iso: &'a I,
    cut: &'a X,
    budget: usize,
) -> ExtendedCut<'a, T, I, X>
where
    T: EnumeratedOrder + ?Sized,
    I: IsoRule + ?Sized,
    X: Cut + ?Sized,
{
    ExtendedCut {
        target,
        iso,
        cut,
        budget,
    }
}

impl<T, I, X> Cut for ExtendedCut<'_, T, I, X>
where
    T: EnumeratedOrder + ?Sized,
    I: IsoRule + ?Sized,
    X: Cut + ?Sized,
{
    fn contains(&self, q: usize) -> Result<bool, OrderError> {
        for p in 0..self.budget {
            let Some(image) = self.iso.image(p) else {
                continue;
            };
            let inside = self.cut.contains(p)?;
            let c = cmp(self.target, image, q)?;
            if inside && c != Ordering::Less {
                return Ok(true);
            }
            if !inside && c != Ordering::Greater {
                return Ok(false);
            }
        }
        Err(OrderError::BudgetExhausted {
            requirement: Requirement::Membership(q),
            budget: self.budget,
        })
    }

    fn label(&self) -> String {
        format!("I*({})", self.cut.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{Dyadics, FiniteOrder, Omega, PointCut, PredicateCut, Rationals};

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn zero_rounds_is_empty() {
        let iso = back_and_forth(&Rationals, &Dyadics, 0, 100).unwrap();
        assert!(iso.is_empty());
        assert!(iso.transcript().is_empty());
    }

    #[test]
    fn first_rounds_against_dyadics() {
        let iso = back_and_forth(&Rationals, &Dyadics, 3, 1000).unwrap();
        assert_eq!(iso.get(0), Some(0));
        // round 1 pulls back b0, which is already hit
        assert!(iso.transcript()[1].skipped);
        // round 2: a1 = 1 goes to the first dyadic above 0, which is b1 = 1/2
        assert_eq!(Rationals::value(1), q("1"));
        assert_eq!(iso.get(1), Some(1));
        assert_eq!(Dyadics::value(1), q("1/2"));
    }

    #[test]
    fn coverage_and_preservation() {
        let iso = back_and_forth(&Rationals, &Dyadics, 40, 100_000).unwrap();
        for i in 0..20 {
            assert!(iso.get(i).is_some());
            assert!(iso.preimage(i).is_some());
        }
        assert_eq!(iso.verify(&Rationals, &Dyadics).unwrap(), None);
        let again = PartialIso::from_transcript(&Rationals, iso.transcript()).unwrap();
        assert_eq!(again, iso);
    }

    #[test]
    fn stuck_on_omega() {
        let err = back_and_forth(&Rationals, &Omega, 8, 50).unwrap_err();
        assert!(matches!(err, BackForthError::ExtensionStuck { .. }));
    }

    #[test]
    fn embedding_examples() {
        // a, b, c with c < a < b
        let abc = FiniteOrder::from_keys(&[1, 2, 0]);
        assert_eq!(embed_into_rationals(&abc, 3).unwrap(), [q("0"), q("1"), q("-1")]);
        assert_eq!(
            embed_into_rationals(&FiniteOrder::from_keys(&[5]), 1).unwrap(),
            [q("0")]
        );
        assert_eq!(embed_into_rationals(&Omega, 3).unwrap(), [q("0"), q("1"), q("2")]);
    }

    #[test]
    fn identity_extends_sqrt2_cut() {
        let id = FnRule(Some);
        let sqrt2 = PredicateCut::new("sqrt2", |i| {
            let v = Rationals::value(i);
            v.is_negative() || &v * &v < q("2")
        });
        let ext = extend_to_completion(&Rationals, &id, &sqrt2, 100_000);
        for j in 0..200 {
            assert_eq!(ext.contains(j).unwrap(), sqrt2.contains(j).unwrap(), "a{j}");
        }
    }

    #[test]
    fn doubling_moves_the_cut() {
        let double = FnRule(|i| Rationals::index_of(&(Rationals::value(i) * q("2"))));
        let below_one = PredicateCut::new("<1", |i| Rationals::value(i) < q("1"));
        let ext = extend_to_completion(&Rationals, &double, &below_one, 100_000);
        for s in ["0", "3/2", "-7", "7/4", "2", "5/2", "3"] {
            let j = Rationals::index_of(&q(s)).unwrap();
            assert_eq!(ext.contains(j).unwrap(), q(s) < q("2"), "{s}");
        }
    }

    #[test]
    fn point_cuts_go_to_point_cuts() {
        let iso = back_and_forth(&Rationals, &Dyadics, 60, 100_000).unwrap();
        for (p, fp) in iso.pairs().take(10) {
            let x = PointCut::new(&Rationals, p);
            let ext = extend_to_completion(&Dyadics, &iso, &x, 1000);
            let image = PointCut::new(&Dyadics, fp);
            for j in 0..30 {
                assert_eq!(ext.contains(j).unwrap(), image.contains(j).unwrap());
            }
        }
    }
}
