//! Countable linear orders presented intensionally: an enumeration
//! `a0, a1, a2, ...` indexed by naturals plus a computable comparison.
//!
//! Nothing here materializes an infinite set. Every checker inspects a
//! finite prefix, and searches for witnesses run under an explicit budget.
//! A search that runs out of budget is reported as
//! [`OrderError::BudgetExhausted`], never as a refutation, unless the
//! presentation is finite and the whole enumeration was searched or the
//! presentation certifies the gap empty.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::rat::Rat;

pub mod presentations;

pub use presentations::{
    builtin, Dyadics, FiniteOrder, NonzeroRationals, Omega, OmegaTwo, Rationals, UnitDyadics, UnitRationals,
    BUILTIN_DLOS, BUILTIN_NAMES,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("no witness for {requirement} within a budget of {budget}")]
    BudgetExhausted { requirement: Requirement, budget: usize },
    #[error("{requirement} is refuted")]
    Refuted { requirement: Requirement },
    #[error("interval #{index} is empty or its nonemptiness cannot be witnessed")]
    EmptyInterval { index: usize },
    #[error("elements a{0} and a{1} are not related by the presentation")]
    Incomparable(usize, usize),
}

/// Something a density or unboundedness check needs a witness for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    /// An element strictly between `a_lower < a_upper`.
    Between {
        lower: usize,
        upper: usize,
    },
    Below(usize),
    Above(usize),
    /// An element in the overlap of two family members.
    Overlap {
        first: usize,
        second: usize,
    },
    /// A certificate deciding whether `a_i` belongs to a cut.
    Membership(usize),
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Between { lower, upper } => {
                write!(f, "an element between a{lower} and a{upper}")
            }
            Requirement::Below(i) => write!(f, "an element below a{i}"),
            Requirement::Above(i) => write!(f, "an element above a{i}"),
            Requirement::Overlap { first, second } => {
                write!(f, "an element common to intervals #{first} and #{second}")
            }
            Requirement::Membership(i) => write!(f, "a membership certificate for a{i}"),
        }
    }
}

/// A countable linear order given by an enumeration and a comparison rule.
pub trait EnumeratedOrder {
    /// Number of elements, or `None` for an infinite enumeration.
    fn len(&self) -> Option<usize>;

    /// Compares `a_i` with `a_j`; `None` when the rule does not relate them.
    fn compare(&self, i: usize, j: usize) -> Option<Ordering>;

    fn name(&self) -> String {
        String::from("order")
    }

    /// The element as a rational, for presentations living inside `Q`.
    fn rational(&self, _i: usize) -> Option<Rat> {
        None
    }

    /// Enumeration index of a rational, when it is an element.
    fn locate(&self, _value: &Rat) -> Option<usize> {
        None
    }

    /// Discreteness certificate: `Some(true)` when the open gap between
    /// `a_i < a_j` is provably empty.
    fn gap_is_empty(&self, _i: usize, _j: usize) -> Option<bool> {
        None
    }

    fn describe(&self, i: usize) -> String {
        match self.rational(i) {
            Some(r) => format!("{r}"),
            None => format!("a{i}"),
        }
    }

    fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }
}

impl<T: EnumeratedOrder + ?Sized> EnumeratedOrder for &T {
    fn len(&self) -> Option<usize> {
        (**self).len()
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        (**self).compare(i, j)
    }
    fn name(&self) -> String {
        (**self).name()
    }
    fn rational(&self, i: usize) -> Option<Rat> {
        (**self).rational(i)
    }
    fn locate(&self, value: &Rat) -> Option<usize> {
        (**self).locate(value)
    }
    fn gap_is_empty(&self, i: usize, j: usize) -> Option<bool> {
        (**self).gap_is_empty(i, j)
    }
    fn describe(&self, i: usize) -> String {
        (**self).describe(i)
    }
}

impl<T: EnumeratedOrder + ?Sized> EnumeratedOrder for Box<T> {
    fn len(&self) -> Option<usize> {
        (**self).len()
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        (**self).compare(i, j)
    }
    fn name(&self) -> String {
        (**self).name()
    }
    fn rational(&self, i: usize) -> Option<Rat> {
        (**self).rational(i)
    }
    fn locate(&self, value: &Rat) -> Option<usize> {
        (**self).locate(value)
    }
    fn gap_is_empty(&self, i: usize, j: usize) -> Option<bool> {
        (**self).gap_is_empty(i, j)
    }
    fn describe(&self, i: usize) -> String {
        (**self).describe(i)
    }
}

/// Total comparison, turning an unrelated pair into an error.
pub fn cmp<P: EnumeratedOrder + ?Sized>(p: &P, i: usize, j: usize) -> Result<Ordering, OrderError> {
    p.compare(i, j).ok_or(OrderError::Incomparable(i, j))
}

/// Number of indices below `budget` that actually exist.
pub fn search_limit<P: EnumeratedOrder + ?Sized>(p: &P, budget: usize) -> usize {
    p.len().map_or(budget, |n| n.min(budget))
}

/// True when a search over `budget` indices covers the whole enumeration.
pub fn search_is_exhaustive<P: EnumeratedOrder + ?Sized>(p: &P, budget: usize) -> bool {
    p.len().is_some_and(|n| n <= budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// The rule returned no answer for the pair.
    Incomparable(usize, usize),
    /// `a_i` does not compare equal to itself.
    Reflexive(usize),
    /// Distinct indices compare equal.
    Duplicate(usize, usize),
    /// `compare(i, j)` is not the reverse of `compare(j, i)`.
    Asymmetric(usize, usize),
    /// `a_i < a_j < a_k` but not `a_i < a_k`.
    Intransitive(usize, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomReport {
    Pass,
    Violation(AxiomViolation),
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomReport::Pass)
    }
}

/// Checks totality, irreflexivity and transitivity on the first `n`
/// elements (clamped to the presentation's size).
pub fn check_axioms<P: EnumeratedOrder + ?Sized>(p: &P, n: usize) -> AxiomReport {
    let n = search_limit(p, n);
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(p.compare(i, j));
        }
    }
    let at = |i: usize, j: usize| table[i * n + j];
    for i in 0..n {
        if at(i, i) != Some(Ordering::Equal) {
            return AxiomReport::Violation(AxiomViolation::Reflexive(i));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            match (at(i, j), at(j, i)) {
                (None, _) | (_, None) => return AxiomReport::Violation(AxiomViolation::Incomparable(i, j)),
                (Some(Ordering::Equal), _) | (_, Some(Ordering::Equal)) => {
                    return AxiomReport::Violation(AxiomViolation::Duplicate(i, j))
                }
                (Some(x), Some(y)) if x != y.reverse() => {
                    return AxiomReport::Violation(AxiomViolation::Asymmetric(i, j))
                }
                _ => {}
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if at(i, j) != Some(Ordering::Less) {
                continue;
            }
            for k in 0..n {
                if at(j, k) == Some(Ordering::Less) && at(i, k) != Some(Ordering::Less) {
                    return AxiomReport::Violation(AxiomViolation::Intransitive(i, j, k));
                }
            }
        }
    }
    AxiomReport::Pass
}

/// First index `k < budget` with `a_k` strictly inside the given bounds.
pub fn find_between<P: EnumeratedOrder + ?Sized>(
    p: &P,
    lower: Bound,
    upper: Bound,
    budget: usize,
) -> Result<Option<usize>, OrderError> {
    for k in 0..search_limit(p, budget) {
        if bound_below(p, lower, k)? && bound_above(p, upper, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn bound_below<P: EnumeratedOrder + ?Sized>(p: &P, b: Bound, k: usize) -> Result<bool, OrderError> {
    Ok(match b {
        Bound::NegInf => true,
        Bound::PosInf => false,
        Bound::At(i) => cmp(p, i, k)? == Ordering::Less,
    })
}

fn bound_above<P: EnumeratedOrder + ?Sized>(p: &P, b: Bound, k: usize) -> Result<bool, OrderError> {
    Ok(match b {
        Bound::PosInf => true,
        Bound::NegInf => false,
        Bound::At(j) => cmp(p, k, j)? == Ordering::Less,
    })
}

fn unwitnessed<P: EnumeratedOrder + ?Sized>(
    p: &P,
    requirement: Requirement,
    budget: usize,
    certified_empty: bool,
) -> OrderError {
    if certified_empty || search_is_exhaustive(p, budget) {
        OrderError::Refuted { requirement }
    } else {
        OrderError::BudgetExhausted { requirement, budget }
    }
}

/// Density and unboundedness on the first `n` elements, searching witnesses
/// among indices below `budget`. Pairs are checked before endpoints.
pub fn check_dense_unbounded<P: EnumeratedOrder + ?Sized>(p: &P, n: usize, budget: usize) -> Result<(), OrderError> {
    let n = search_limit(p, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (lower, upper) = match cmp(p, i, j)? {
                Ordering::Less => (i, j),
                Ordering::Greater => (j, i),
                Ordering::Equal => continue,
            };
            if find_between(p, Bound::At(lower), Bound::At(upper), budget)?.is_none() {
                let certified = p.gap_is_empty(lower, upper) == Some(true);
                return Err(unwitnessed(p, Requirement::Between { lower, upper }, budget, certified));
            }
        }
    }
    for i in 0..n {
        if find_between(p, Bound::NegInf, Bound::At(i), budget)?.is_none() {
            return Err(unwitnessed(p, Requirement::Below(i), budget, false));
        }
        if find_between(p, Bound::At(i), Bound::PosInf, budget)?.is_none() {
            return Err(unwitnessed(p, Requirement::Above(i), budget, false));
        }
    }
    Ok(())
}

/// An endpoint of an open interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    At(usize),
    PosInf,
}

/// The open interval `(lower, upper)` of an enumerated order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lower: Bound,
    pub upper: Bound,
}

impl Interval {
    pub fn new(lower: Bound, upper: Bound) -> Self {
        Interval { lower, upper }
    }

    pub fn between(i: usize, j: usize) -> Self {
        Interval::new(Bound::At(i), Bound::At(j))
    }

    pub fn contains<P: EnumeratedOrder + ?Sized>(&self, p: &P, k: usize) -> Result<bool, OrderError> {
        Ok(bound_below(p, self.lower, k)? && bound_above(p, self.upper, k)?)
    }
}

/// Compares two lower bounds (or two upper bounds) as positions on the line.
pub fn compare_bounds<P: EnumeratedOrder + ?Sized>(p: &P, a: Bound, b: Bound) -> Result<Ordering, OrderError> {
    Ok(match (a, b) {
        (Bound::At(i), Bound::At(j)) => cmp(p, i, j)?,
        (x, y) if x == y => Ordering::Equal,
        (Bound::NegInf, _) | (_, Bound::PosInf) => Ordering::Less,
        (Bound::PosInf, _) | (_, Bound::NegInf) => Ordering::Greater,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DisjointReport {
    PairwiseDisjoint,
    /// Positions refer to the family as passed in; `witness` lies in both.
    Overlap {
        first: usize,
        second: usize,
        witness: usize,
    },
}

impl DisjointReport {
    pub fn is_disjoint(&self) -> bool {
        matches!(self, DisjointReport::PairwiseDisjoint)
    }
}

/// Rational midpoint of a window, when the presentation contains it.
fn midpoint_witness<P: EnumeratedOrder + ?Sized>(p: &P, lower: Bound, upper: Bound) -> Option<usize> {
    let value = |b: Bound| match b {
        Bound::At(i) => p.rational(i),
        _ => None,
    };
    let mid = match (lower, upper) {
        (Bound::At(_), Bound::At(_)) => value(lower)?.midpoint(&value(upper)?),
        (Bound::NegInf, Bound::At(_)) => value(upper)? - Rat::one(),
        (Bound::At(_), Bound::PosInf) => value(lower)? + Rat::one(),
        (Bound::NegInf, Bound::PosInf) => Rat::zero(),
        _ => return None,
    };
    p.locate(&mid)
}

/// A deterministic element of the open window, trying the rational
/// midpoint first and then the enumeration up to `budget`.
fn window_witness<P: EnumeratedOrder + ?Sized>(
    p: &P,
    lower: Bound,
    upper: Bound,
    budget: usize,
) -> Result<Option<usize>, OrderError> {
    if let Some(k) = midpoint_witness(p, lower, upper) {
        if Interval::new(lower, upper).contains(p, k)? {
            return Ok(Some(k));
        }
    }
    find_between(p, lower, upper, budget)
}

/// Decides whether a finite family of nonempty open intervals is pairwise
/// disjoint. Overlaps carry a witness element: the rational midpoint of the
/// tightest overlap when the presentation contains it, else the first
/// enumerated element of the overlap.
pub fn verify_disjoint_family<P: EnumeratedOrder + ?Sized>(
    p: &P,
    family: &[Interval],
    budget: usize,
) -> Result<DisjointReport, OrderError> {
    for (index, iv) in family.iter().enumerate() {
        if compare_bounds(p, iv.lower, iv.upper)? != Ordering::Less
            || window_witness(p, iv.lower, iv.upper, budget)?.is_none()
        {
            return Err(OrderError::EmptyInterval { index });
        }
    }
    // Canonical scan order so the report does not depend on how the
    // family happens to be listed.
    let mut order: Vec<usize> = (0..family.len()).collect();
    let mut sort_err = None;
    order.sort_by(|&a, &b| {
        let key = |x: usize, y: usize| -> Result<Ordering, OrderError> {
            Ok(
                compare_bounds(p, family[x].lower, family[y].lower)?.then(compare_bounds(
                    p,
                    family[x].upper,
                    family[y].upper,
                )?),
            )
        };
        key(a, b).unwrap_or_else(|e| {
            sort_err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = sort_err {
        return Err(e);
    }
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            let (x, y) = (family[a], family[b]);
            let lower = match compare_bounds(p, x.lower, y.lower)? {
                Ordering::Less => y.lower,
                _ => x.lower,
            };
            let upper = match compare_bounds(p, x.upper, y.upper)? {
                Ordering::Greater => y.upper,
                _ => x.upper,
            };
            if compare_bounds(p, lower, upper)? != Ordering::Less {
                continue;
            }
            let (first, second) = (a.min(b), a.max(b));
            match window_witness(p, lower, upper, budget)? {
                Some(witness) => return Ok(DisjointReport::Overlap { first, second, witness }),
                None => {
                    let certified = match (lower, upper) {
                        (Bound::At(i), Bound::At(j)) => p.gap_is_empty(i, j) == Some(true),
                        _ => false,
                    };
                    if !(certified || search_is_exhaustive(p, budget)) {
                        return Err(OrderError::BudgetExhausted {
                            requirement: Requirement::Overlap { first, second },
                            budget,
                        });
                    }
                }
            }
        }
    }
    Ok(DisjointReport::PairwiseDisjoint)
}

/// A Dedekind-style cut: a downward-closed set of elements, given by a
/// membership test on enumeration indices.
pub trait Cut {
    fn contains(&self, i: usize) -> Result<bool, OrderError>;

    fn label(&self) -> String {
        String::from("cut")
    }
}

impl<C: Cut + ?Sized> Cut for &C {
    fn contains(&self, i: usize) -> Result<bool, OrderError> {
        (**self).contains(i)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

/// A cut whose membership is a plain predicate.
pub struct PredicateCut<F> {
    label: String,
    member: F,
}

impl<F: Fn(usize) -> bool> PredicateCut<F> {
    pub fn new(label: impl Into<String>, member: F) -> Self {
        PredicateCut {
            label: label.into(),
            member,
        }
    }
}

impl<F: Fn(usize) -> bool> Cut for PredicateCut<F> {
    fn contains(&self, i: usize) -> Result<bool, OrderError> {
        Ok((self.member)(i))
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

/// The cut of a point: `{ q : q <= a_p }`.
pub struct PointCut<'a, P: ?Sized> {
    order: &'a P,
    point: usize,
}

impl<'a, P: EnumeratedOrder + ?Sized> PointCut<'a, P> {
    pub fn new(order: &'a P, point: usize) -> Self {
        PointCut { order, point }
    }

    pub fn point(&self) -> usize {
        self.point
    }
}

impl<P: EnumeratedOrder + ?Sized> Cut for PointCut<'_, P> {
    fn contains(&self, i: usize) -> Result<bool, OrderError> {
        Ok(cmp(self.order, i, self.point)? != Ordering::Greater)
    }
    fn label(&self) -> String {
        format!("<= {}", self.order.describe(self.point))
    }
}

/// Spot-checks downward closure on the first `n` elements; returns a pair
/// `(i, j)` with `a_i < a_j`, `j` in the cut and `i` outside it.
pub fn check_downward_closed<P, C>(p: &P, cut: &C, n: usize) -> Result<Option<(usize, usize)>, OrderError>
where
    P: EnumeratedOrder + ?Sized,
    C: Cut + ?Sized,
{
    let n = search_limit(p, n);
    let members = (0..n).map(|i| cut.contains(i)).collect::<Result<Vec<_>, _>>()?;
    for j in (0..n).filter(|&j| members[j]) {
        for i in (0..n).filter(|&i| !members[i]) {
            if cmp(p, i, j)? == Ordering::Less {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_index(q: &Rationals, s: &str) -> usize {
        q.locate(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn axioms_on_rationals() {
        assert!(check_axioms(&Rationals, 50).passed());
        assert!(check_axioms(&Rationals, 0).passed());
    }

    #[test]
    fn three_cycle_is_intransitive() {
        let cyc =
            FiniteOrder::from_pairs(["a0", "a1", "a2"].map(String::from).to_vec(), &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(
            check_axioms(&cyc, 3),
            AxiomReport::Violation(AxiomViolation::Intransitive(0, 1, 2))
        );
    }

    #[test]
    fn missing_pair_is_reported() {
        let partial = FiniteOrder::from_pairs(["x", "y", "z"].map(String::from).to_vec(), &[(0, 1)]).unwrap();
        assert_eq!(
            check_axioms(&partial, 3),
            AxiomReport::Violation(AxiomViolation::Incomparable(0, 2))
        );
    }

    #[test]
    fn density_examples() {
        assert_eq!(check_dense_unbounded(&Rationals, 20, 10_000), Ok(()));
        assert_eq!(
            check_dense_unbounded(&Omega, 5, 10_000),
            Err(OrderError::BudgetExhausted {
                requirement: Requirement::Between { lower: 0, upper: 1 },
                budget: 10_000
            })
        );
        assert_eq!(check_dense_unbounded(&Rationals, 1, 100), Ok(()));
        assert_eq!(
            check_dense_unbounded(&Omega, 1, 100),
            Err(OrderError::BudgetExhausted {
                requirement: Requirement::Below(0),
                budget: 100
            })
        );
    }

    #[test]
    fn finite_orders_refute_density() {
        let three = FiniteOrder::from_keys(&[2, 0, 1]);
        assert_eq!(
            check_dense_unbounded(&three, 3, 10),
            Err(OrderError::Refuted {
                requirement: Requirement::Between { lower: 2, upper: 0 }
            })
        );
    }

    #[test]
    fn density_monotone_in_budget() {
        for budget in [4usize, 16, 64, 256] {
            let small = check_dense_unbounded(&Rationals, 6, budget).is_ok();
            let big = check_dense_unbounded(&Rationals, 6, budget * 4).is_ok();
            assert!(!small || big);
        }
    }

    #[test]
    fn disjoint_families() {
        let q = Rationals;
        let iv = |a: &str, b: &str| Interval::between(q_index(&q, a), q_index(&q, b));
        let fam = [iv("0", "1"), iv("1", "2"), iv("2", "3")];
        assert_eq!(
            verify_disjoint_family(&q, &fam, 1000),
            Ok(DisjointReport::PairwiseDisjoint)
        );
        let fam = [iv("0", "2"), iv("1", "3")];
        let report = verify_disjoint_family(&q, &fam, 1000).unwrap();
        let DisjointReport::Overlap { first, second, witness } = report else {
            panic!("expected overlap");
        };
        assert_eq!((first, second), (0, 1));
        assert_eq!(q.rational(witness).unwrap(), Rat::new(3, 2));
        assert_eq!(
            verify_disjoint_family(&q, &[], 10),
            Ok(DisjointReport::PairwiseDisjoint)
        );
        let unbounded = [
            Interval::new(Bound::NegInf, Bound::At(q_index(&q, "0"))),
            Interval::new(Bound::At(q_index(&q, "-1")), Bound::PosInf),
        ];
        let r = verify_disjoint_family(&q, &unbounded, 1000).unwrap();
        assert!(matches!(r, DisjointReport::Overlap { witness, .. } if q.rational(witness) == Some(Rat::new(-1, 2))));
    }

    #[test]
    fn disjointness_in_discrete_orders() {
        // (0,2) and (1,3) in omega share the element 2? No: 2 is excluded
        // from (0,2). They share nothing, but only a finite order can say so.
        let fam = [Interval::between(0, 2), Interval::between(1, 3)];
        assert!(matches!(
            verify_disjoint_family(&Omega, &fam, 50),
            Err(OrderError::BudgetExhausted { .. })
        ));
        let five = FiniteOrder::from_keys(&[0, 1, 2, 3, 4]);
        assert_eq!(
            verify_disjoint_family(&five, &fam, 50),
            Ok(DisjointReport::PairwiseDisjoint)
        );
        let empty = [Interval::between(0, 1)];
        assert_eq!(
            verify_disjoint_family(&five, &empty, 50),
            Err(OrderError::EmptyInterval { index: 0 })
        );
    }

    #[test]
    fn cuts() {
        let q = Rationals;
        let two = q_index(&q, "2");
        let cut = PointCut::new(&q, two);
        assert!(cut.contains(two).unwrap());
        assert_eq!(check_downward_closed(&q, &cut, 100), Ok(None));
        let sqrt2 = PredicateCut::new("sqrt2", |i| {
            let v = q.rational(i).unwrap();
            v.is_negative() || &v * &v < Rat::integer(2)
        });
        assert_eq!(check_downward_closed(&q, &sqrt2, 100), Ok(None));
        let bogus = PredicateCut::new("upper", |i| q.rational(i).unwrap() > Rat::zero());
        assert!(check_downward_closed(&q, &bogus, 20).unwrap().is_some());
    }
}
