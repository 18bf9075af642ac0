//! Bounded, strictly increasing transfinite sequences of rationals, kept
//! symbolic.
//!
//! A [`RatSeq`] is a concatenation of segments. An [`Segment::Atom`] is a
//! single entry; a [`Segment::Fill`] of length `w^e` over `(lo, hi)` is the
//! canonical embedding of `w^e` into that interval:
//!
//! * `w`: entry `k` is `lo + (hi - lo) * (1 - 2^-(k+1))`;
//! * `w^e`, `e >= 2`: cut `(lo, hi)` into blocks `(u_n, u_n+1)` with
//!   `u_n = lo + (hi - lo) * (1 - 2^-n)` and put a `w^(e-1)` fill in
//!   block `n`.
//!
//! Every fill satisfies `Fill(w^e, (a, b)) = Fill(w^(e-1), (a, m)) ++
//! Fill(w^e, (m, b))` with `m` the midpoint (an atom at `m` when `e = 1`).
//! Equality and the initial-segment relation peel fills with this identity,
//! so two different segment lists denoting the same sequence compare equal.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

use num_traits::ToPrimitive;

use crate::ordinal::{Ordinal, Term};
use crate::rat::{ExtRat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatSeqError {
    #[error("interval ({lo}, {hi}) is empty")]
    EmptyInterval { lo: Rat, hi: Rat },
    #[error("index {index} is out of range for length {length}")]
    IndexOutOfRange { index: Ordinal, length: Ordinal },
    #[error("{value} is not above every entry (sup {sup})")]
    NotAboveSup { value: Rat, sup: ExtRat },
    #[error("a fill must have length w^e with e >= 1")]
    BadFillLength,
    #[error("segment {0} does not lie above the entries before it")]
    NotIncreasing(usize),
    #[error("canonical sequences need a nonzero length")]
    ZeroLength,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Atom(Rat),
    Fill { exponent: u32, lo: Rat, hi: Rat },
}

impl Segment {
    pub fn length(&self) -> Ordinal {
        match self {
            Segment::Atom(_) => Ordinal::one(),
            Segment::Fill { exponent, .. } => Ordinal::omega_pow(*exponent),
        }
    }

    fn exponent(&self) -> u32 {
        match self {
            Segment::Atom(_) => 0,
            Segment::Fill { exponent, .. } => *exponent,
        }
    }

    fn sup(&self) -> &Rat {
        match self {
            Segment::Atom(r) => r,
            Segment::Fill { hi, .. } => hi,
        }
    }

    /// Whether every entry of the segment exceeds entries whose supremum is
    /// `sup` (attained or not).
    fn fits_after(&self, sup: &ExtRat, attained: bool) -> bool {
        let Some(s) = sup.finite() else {
            return true;
        };
        match self {
            Segment::Atom(r) => r > s || (!attained && r == s),
            Segment::Fill { lo, .. } => lo >= s,
        }
    }

    /// Splits a fill into its first block and the rest.
    fn peel(&self) -> Option<(Segment, Segment)> {
        let Segment::Fill { exponent, lo, hi } = self else {
            return None;
        };
        let mid = lo.midpoint(hi);
        let head = block_fill(*exponent - 1, lo.clone(), mid.clone());
        let tail = Segment::Fill {
            exponent: *exponent,
            lo: mid,
            hi: hi.clone(),
        };
        Some((head, tail))
    }
}

/// The canonical `w^e` segment on `(lo, hi)`; for `e = 0` an atom at the
/// right endpoint, which is how a `w` fill places its entries.
fn block_fill(exponent: u32, lo: Rat, hi: Rat) -> Segment {
    if exponent == 0 {
        Segment::Atom(hi)
    } else {
        Segment::Fill { exponent, lo, hi }
    }
}

/// `u_n = lo + (hi - lo) * (1 - 2^-n)`.
fn block_point(lo: &Rat, hi: &Rat, n: usize) -> Rat {
    let width = hi - lo;
    lo + &(&width * &(Rat::one() - Rat::pow2(-(n as i64))))
}

/// Splits `index < w^e` (with `e >= 1`) as `w^(e-1) * n + rest`.
fn split_index(index: &Ordinal, exponent: u32) -> Option<(usize, Ordinal)> {
    let n = index.coefficient(exponent - 1).to_usize()?;
    let rest: Vec<Term> = index
        .terms()
        .iter()
        .filter(|t| t.exponent < exponent - 1)
        .cloned()
        .collect();
    Some((n, Ordinal::from_terms(rest).ok()?))
}

#[derive(Clone, Default)]
pub struct RatSeq {
    segments: Vec<Segment>,
    length: Ordinal,
    sup: Option<Rat>,
    attained: bool,
}

impl RatSeq {
    pub fn empty() -> Self {
        RatSeq::default()
    }

    pub fn from_segments(segments: Vec<Segment>) -> Result<Self, RatSeqError> {
        let mut s = RatSeq::empty();
        for seg in segments {
            s.push(seg)?;
        }
        Ok(s)
    }

    fn push(&mut self, seg: Segment) -> Result<(), RatSeqError> {
        if let Segment::Fill { exponent, lo, hi } = &seg {
            if *exponent == 0 {
                return Err(RatSeqError::BadFillLength);
            }
            if lo >= hi {
                return Err(RatSeqError::EmptyInterval {
                    lo: lo.clone(),
                    hi: hi.clone(),
                });
            }
        }
        if !seg.fits_after(&self.sup(), self.attained) {
            return Err(RatSeqError::NotIncreasing(self.segments.len()));
        }
        self.length = &self.length + &seg.length();
        self.sup = Some(seg.sup().clone());
        self.attained = matches!(seg, Segment::Atom(_));
        self.segments.push(seg);
        Ok(())
    }

    /// The canonical embedding of `alpha` into `(a, b)`.
    ///
    /// `alpha = sum w^e_i * c_i` is laid out as `sum c_i` unit runs over
    /// equal-width subintervals; a finite run is the midpoint of its piece.
    pub fn canonical(alpha: &Ordinal, a: &Rat, b: &Rat) -> Result<Self, RatSeqError> {
        if a >= b {
            return Err(RatSeqError::EmptyInterval {
                lo: a.clone(),
                hi: b.clone(),
            });
        }
        if alpha.is_zero() {
            return Err(RatSeqError::ZeroLength);
        }
        let mut runs = Vec::new();
        for t in alpha.terms() {
            let c = t.coefficient.to_usize().ok_or(RatSeqError::BadFillLength)?;
            runs.extend(core::iter::repeat_n(t.exponent, c));
        }
        let width = (b - a) / Rat::integer(runs.len() as i64);
        let mut s = RatSeq::empty();
        for (i, e) in runs.into_iter().enumerate() {
            let lo = a + &(&width * &Rat::integer(i as i64));
            let hi = &lo + &width;
            let seg = if e == 0 {
                Segment::Atom(lo.midpoint(&hi))
            } else {
                Segment::Fill { exponent: e, lo, hi }
            };
            s.push(seg)?;
        }
        Ok(s)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn length(&self) -> &Ordinal {
        &self.length
    }

    /// Supremum of the entries; `-inf` for the empty sequence.
    pub fn sup(&self) -> ExtRat {
        match &self.sup {
            None => ExtRat::NegInf,
            Some(r) => ExtRat::Finite(r.clone()),
        }
    }

    /// Whether the supremum is the last entry.
    pub fn sup_attained(&self) -> bool {
        self.attained
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    fn out_of_range(&self, index: &Ordinal) -> RatSeqError {
        RatSeqError::IndexOutOfRange {
            index: index.clone(),
            length: self.length.clone(),
        }
    }

    pub fn at(&self, index: &Ordinal) -> Result<Rat, RatSeqError> {
        let mut rel = index.clone();
        for seg in &self.segments {
            let len = seg.length();
            if rel < len {
                return segment_at(seg, &rel).ok_or_else(|| self.out_of_range(index));
            }
            rel = len.subtract_left(&rel).expect("rel >= len");
        }
        Err(self.out_of_range(index))
    }

    /// The first `beta` entries.
    pub fn restrict(&self, beta: &Ordinal) -> Result<RatSeq, RatSeqError> {
        if beta > &self.length {
            return Err(self.out_of_range(beta));
        }
        let mut out = RatSeq::empty();
        let mut rel = beta.clone();
        for seg in &self.segments {
            if rel.is_zero() {
                break;
            }
            let len = seg.length();
            if rel >= len {
                out.push(seg.clone())?;
                rel = len.subtract_left(&rel).expect("rel >= len");
            } else {
                let mut pieces = Vec::new();
                restrict_segment(seg, &rel, &mut pieces).ok_or_else(|| self.out_of_range(beta))?;
                for p in pieces {
                    out.push(p)?;
                }
                break;
            }
        }
        Ok(out)
    }

    /// `self` followed by one more entry `r`, which must exceed every entry.
    pub fn extend(&self, r: Rat) -> Result<RatSeq, RatSeqError> {
        let sup = self.sup();
        let mut out = self.clone();
        out.push(Segment::Atom(r.clone()))
            .map_err(|_| RatSeqError::NotAboveSup { value: r, sup })?;
        Ok(out)
    }

    /// `self` followed by `tail`.
    pub fn concat(&self, tail: &RatSeq) -> Result<RatSeq, RatSeqError> {
        let mut out = self.clone();
        for seg in &tail.segments {
            out.push(seg.clone())?;
        }
        Ok(out)
    }

    /// True when `self` is an initial segment of `other`.
    pub fn is_initial_segment(&self, other: &RatSeq) -> bool {
        if self.length > other.length {
            return false;
        }
        let mut xs: VecDeque<Segment> = self.segments.iter().cloned().collect();
        let mut ys: VecDeque<Segment> = other.segments.iter().cloned().collect();
        while let Some(x) = xs.pop_front() {
            let Some(y) = ys.pop_front() else {
                return false;
            };
            let (ex, ey) = (x.exponent(), y.exponent());
            if ex > ey {
                let (h, t) = x.peel().expect("fill");
                xs.push_front(t);
                xs.push_front(h);
                ys.push_front(y);
            } else if ey > ex {
                let (h, t) = y.peel().expect("fill");
                ys.push_front(t);
                ys.push_front(h);
                xs.push_front(x);
            } else if x != y {
                return false;
            }
        }
        true
    }
}

fn segment_at(seg: &Segment, rel: &Ordinal) -> Option<Rat> {
    match seg {
        Segment::Atom(r) => rel.is_zero().then(|| r.clone()),
        Segment::Fill { exponent, lo, hi } => {
            let (n, rest) = split_index(rel, *exponent)?;
            if *exponent == 1 {
                return Some(block_point(lo, hi, n + 1));
            }
            let inner = Segment::Fill {
                exponent: exponent - 1,
                lo: block_point(lo, hi, n),
                hi: block_point(lo, hi, n + 1),
            };
            segment_at(&inner, &rest)
        }
    }
}

/// Pushes the pieces of the first `rel` entries of `seg` (`0 < rel < len`).
fn restrict_segment(seg: &Segment, rel: &Ordinal, out: &mut Vec<Segment>) -> Option<()> {
    let Segment::Fill { exponent, lo, hi } = seg else {
        return None;
    };
    let (n, rest) = split_index(rel, *exponent)?;
    for k in 0..n {
        out.push(block_fill(
            exponent - 1,
            block_point(lo, hi, k),
            block_point(lo, hi, k + 1),
        ));
    }
    if !rest.is_zero() {
        let inner = Segment::Fill {
            exponent: exponent - 1,
            lo: block_point(lo, hi, n),
            hi: block_point(lo, hi, n + 1),
        };
        restrict_segment(&inner, &rest, out)?;
    }
    Some(())
}

impl PartialEq for RatSeq {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length && self.is_initial_segment(other)
    }
}

impl Eq for RatSeq {}

impl fmt::Debug for RatSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match seg {
                Segment::Atom(r) => write!(f, "{r}")?,
                Segment::Fill { exponent, lo, hi } => write!(f, "{}:({lo}, {hi})", Ordinal::omega_pow(*exponent))?,
            }
        }
        f.write_str("]")
    }
}
