//! Ordinals below `w^w` in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `w^e1*c1 + w^e2*c2 + ...` with strictly
//! decreasing natural exponents and positive arbitrary-precision
//! coefficients. The empty sum is `0`.
//!
//! The textual notation is `w^2*3+w+5`; `w` stands for omega, and `w*1`,
//! `w^1` and `w^0*5` are accepted on input. Sums that are not in normal
//! form (`1+w`) are evaluated with ordinal addition, so `1+w` parses as `w`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalError {
    #[error("left operand {left} exceeds right operand {right}")]
    LeftOperandExceeds { left: Ordinal, right: Ordinal },
    #[error("{0} is not a limit ordinal")]
    NotLimit(Ordinal),
    #[error("terms are not in Cantor normal form")]
    NotNormalForm,
    #[error("cannot parse ordinal {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },
}

/// One `w^exponent * coefficient` summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: u32,
    pub coefficient: BigUint,
}

impl Term {
    pub fn new(exponent: u32, coefficient: impl Into<BigUint>) -> Self {
        Term {
            exponent,
            coefficient: coefficient.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Zero,
    Successor,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::natural(1u32)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(1)
    }

    pub fn natural(n: impl Into<BigUint>) -> Self {
        Ordinal::monomial(0, n)
    }

    pub fn omega_pow(exponent: u32) -> Self {
        Ordinal::monomial(exponent, 1u32)
    }

    /// `w^exponent * coefficient`; zero when the coefficient is zero.
    pub fn monomial(exponent: u32, coefficient: impl Into<BigUint>) -> Self {
        let coefficient = coefficient.into();
        if coefficient.is_zero() {
            return Ordinal::zero();
        }
        Ordinal {
            terms: alloc::vec![Term { exponent, coefficient }],
        }
    }

    /// Builds an ordinal from terms that are already in normal form.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, OrdinalError> {
        let decreasing = terms.windows(2).all(|w| w[0].exponent > w[1].exponent);
        if !decreasing || terms.iter().any(|t| t.coefficient.is_zero()) {
            return Err(OrdinalError::NotNormalForm);
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn classify(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some(t) if t.exponent == 0 => Kind::Successor,
            Some(_) => Kind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == Kind::Limit
    }

    pub fn is_successor(&self) -> bool {
        self.classify() == Kind::Successor
    }

    /// The value as a machine integer when the ordinal is finite and fits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent == 0 => t.coefficient.to_u64(),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent == 0)
    }

    /// Exponent of the leading term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.exponent)
    }

    /// Coefficient of `w^exponent` (zero when the term is absent).
    pub fn coefficient(&self, exponent: u32) -> BigUint {
        self.terms
            .iter()
            .find(|t| t.exponent == exponent)
            .map(|t| t.coefficient.clone())
            .unwrap_or_default()
    }

    pub fn successor(&self) -> Ordinal {
        self + &Ordinal::one()
    }

    /// `a - 1` for successor ordinals.
    pub fn predecessor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a last term");
        last.coefficient -= 1u32;
        if last.coefficient.is_zero() {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    /// The unique `d` with `self + d == other`.
    pub fn subtract_left(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if self > other {
            return Err(OrdinalError::LeftOperandExceeds {
                left: self.clone(),
                right: other.clone(),
            });
        }
        let split = self.terms.iter().zip(&other.terms).position(|(a, b)| a != b);
        let Some(i) = split else {
            // `self` is a prefix of `other`.
            return Ok(Ordinal {
                terms: other.terms[self.terms.len()..].to_vec(),
            });
        };
        let (a, b) = (&self.terms[i], &other.terms[i]);
        let mut terms = Vec::with_capacity(other.terms.len() - i);
        if a.exponent == b.exponent {
            terms.push(Term {
                exponent: b.exponent,
                coefficient: &b.coefficient - &a.coefficient,
            });
            terms.extend_from_slice(&other.terms[i + 1..]);
        } else {
            terms.extend_from_slice(&other.terms[i..]);
        }
        Ok(Ordinal { terms })
    }

    /// Fundamental sequence of a limit: for `a = g + w^e`, `a[n] = g + w^(e-1)*n`.
    pub fn fundamental_seq(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.clone()));
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("limit has a last term");
        let e = last.exponent;
        last.coefficient -= 1u32;
        if last.coefficient.is_zero() {
            terms.pop();
        }
        Ok(&Ordinal { terms } + &Ordinal::monomial(e - 1, n))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then_with(|| a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .cloned()
            .collect();
        match terms.last_mut() {
            Some(t) if t.exponent == lead.exponent => {
                t.coefficient += &lead.coefficient;
                terms.extend_from_slice(&rhs.terms[1..]);
            }
            _ => terms.extend_from_slice(&rhs.terms),
        }
        Ordinal { terms }
    }
}

impl Add for Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: Ordinal) -> Ordinal {
        &self + &rhs
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::natural(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match t.exponent {
                0 => write!(f, "{}", t.coefficient)?,
                1 => f.write_str("w")?,
                e => write!(f, "w^{e}")?,
            }
            if t.exponent > 0 && !t.coefficient.is_one() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason| OrdinalError::Parse {
            input: s.to_string(),
            reason,
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input"));
        }
        let mut total = Ordinal::zero();
        for part in compact.split('+') {
            total = &total + &parse_term(part).map_err(fail)?;
        }
        Ok(total)
    }
}

fn parse_natural(s: &str) -> Result<BigUint, &'static str> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err("expected a natural number");
    }
    s.parse::<BigUint>().map_err(|_| "expected a natural number")
}

fn parse_term(part: &str) -> Result<Ordinal, &'static str> {
    let rest = part.strip_prefix('w').or_else(|| part.strip_prefix('ω'));
    let Some(rest) = rest else {
        return Ok(Ordinal::natural(parse_natural(part)?));
    };
    let (exponent, rest) = match rest.strip_prefix('^') {
        Some(r) => {
            let end = r.find('*').unwrap_or(r.len());
            let e = parse_natural(&r[..end])?.to_u32().ok_or("exponent too large")?;
            (e, &r[end..])
        }
        None => (1, rest),
    };
    let coefficient = match rest.strip_prefix('*') {
        Some(c) => parse_natural(c)?,
        None if rest.is_empty() => BigUint::one(),
        None => return Err("unexpected trailing characters"),
    };
    Ok(Ordinal::monomial(exponent, coefficient))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    /// Independent route: dense coefficient vectors `[c0, c1, c2, ...]`
    /// indexed by exponent, with addition done the schoolbook way.
    fn dense(a: &Ordinal, width: usize) -> Vec<u64> {
        let mut v = alloc::vec![0u64; width];
        for t in a.terms() {
            v[t.exponent as usize] = t.coefficient.to_u64().unwrap();
        }
        v
    }

    fn dense_add(a: &[u64], b: &[u64]) -> Vec<u64> {
        let Some(lead) = (0..b.len()).rev().find(|&e| b[e] != 0) else {
            return a.to_vec();
        };
        let mut out = alloc::vec![0u64; a.len()];
        for e in (lead + 1)..a.len() {
            out[e] = a[e];
        }
        out[lead] = a[lead] + b[lead];
        out[..lead].copy_from_slice(&b[..lead]);
        out
    }

    /// Membership oracle: an ordinal below `w^3` is the set of triples
    /// lexicographically below its coefficient triple, so `a < b` iff the
    /// triple of `a` belongs to `b`.
    fn below_w3_contains(b: &Ordinal, a: &Ordinal) -> bool {
        let t = |x: &Ordinal| {
            let d = dense(x, 3);
            (d[2], d[1], d[0])
        };
        t(a) < t(b)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(o("3").cmp(&o("w")), Ordering::Less);
        assert_eq!(o("w*2+1").cmp(&o("w*2")), Ordering::Greater);
        let (a, b) = (o("w^2+1"), o("w*5+4"));
        assert!(below_w3_contains(&a, &b) && !below_w3_contains(&b, &a));
        assert_eq!(a.cmp(&b), Ordering::Greater);
    }

    #[test]
    fn add_examples() {
        assert_eq!(&Ordinal::zero() + &o("w"), o("w"));
        assert_eq!(&o("w") + &Ordinal::one(), o("w+1"));
        let (a, b) = (o("w^2+w*3"), o("w*2+5"));
        assert_eq!(dense_add(&dense(&a, 3), &dense(&b, 3)), alloc::vec![5, 5, 1]);
        assert_eq!(&a + &b, o("w^2+w*5+5"));
        assert_eq!(&o("3") + &o("w"), o("w"));
    }

    #[test]
    fn subtract_left_examples() {
        assert_eq!(o("w").subtract_left(&o("w")).unwrap(), Ordinal::zero());
        assert_eq!(o("w").subtract_left(&o("w*2")).unwrap(), o("w"));
        let d = o("w+2").subtract_left(&o("w^2+w+1")).unwrap();
        assert_eq!(d, o("w^2+w+1"));
        assert_eq!(&o("w+2") + &d, o("w^2+w+1"));
        assert!(matches!(
            o("w+1").subtract_left(&o("w")),
            Err(OrdinalError::LeftOperandExceeds { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(Ordinal::zero().classify(), Kind::Zero);
        assert_eq!(o("w+3").classify(), Kind::Successor);
        assert_eq!(o("w^2*2").classify(), Kind::Limit);
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(o("w").fundamental_seq(4).unwrap(), o("4"));
        assert_eq!(o("w*2").fundamental_seq(0).unwrap(), o("w"));
        assert_eq!(o("w^2").fundamental_seq(3).unwrap(), o("w*3"));
        assert_eq!(o("w^2+w").fundamental_seq(2).unwrap(), o("w^2+2"));
        assert!(matches!(o("w+1").fundamental_seq(0), Err(OrdinalError::NotLimit(_))));
        assert!(Ordinal::zero().fundamental_seq(0).is_err());
    }

    #[test]
    fn notation() {
        assert_eq!(o("w^2*3+w*1+5").to_string(), "w^2*3+w+5");
        assert_eq!(o("w^1").to_string(), "w");
        assert_eq!(o("w^0*7").to_string(), "7");
        assert_eq!(o(" w * 2 + 1 ").to_string(), "w*2+1");
        assert_eq!(o("0"), Ordinal::zero());
        assert_eq!(o("ω^2"), Ordinal::omega_pow(2));
        for bad in ["", "w^", "w*", "x", "w^2*", "1++2", "-1", "w2"] {
            assert!(bad.parse::<Ordinal>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn predecessor_and_successor() {
        assert_eq!(o("w+1").predecessor(), Some(o("w")));
        assert_eq!(o("w").predecessor(), None);
        assert_eq!(o("w*2").successor(), o("w*2+1"));
    }

    #[test]
    fn from_terms_rejects_bad_forms() {
        assert!(Ordinal::from_terms(alloc::vec![Term::new(1, 1u32), Term::new(1, 2u32)]).is_err());
        assert!(Ordinal::from_terms(alloc::vec![Term::new(1, 0u32)]).is_err());
        assert!(Ordinal::from_terms(alloc::vec![Term::new(2, 1u32), Term::new(0, 3u32)]).is_ok());
    }
}
