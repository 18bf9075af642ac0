//! Exact rationals in lowest terms, written `p/q` (or `p` when integral).

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational {0:?}")]
pub struct ParseRatError(pub String);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rat(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn midpoint(&self, other: &Rat) -> Rat {
        Rat((&self.0 + &other.0) / BigInt::from(2))
    }

    /// `2^-k` for a natural `k`.
    pub fn inv_pow2(k: u32) -> Rat {
        Rat(BigRational::new(BigInt::one(), BigInt::one() << k as usize))
    }

    /// `2^k` for a possibly negative `k`.
    pub fn pow2(k: i64) -> Rat {
        let shift = k.unsigned_abs() as usize;
        if k >= 0 {
            Rat::integer(BigInt::one() << shift)
        } else {
            Rat(BigRational::new(BigInt::one(), BigInt::one() << shift))
        }
    }

    /// Largest power of two dividing a nonzero rational, as an exponent:
    /// `x = odd/odd * 2^k`.
    pub fn two_adic_valuation(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let tz = |n: &BigInt| n.trailing_zeros().unwrap_or(0) as i64;
        Some(tz(self.numer()) - tz(self.denom()))
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = || ParseRatError(s.to_string());
        let s = s.trim();
        let int = |t: &str| -> Result<BigInt, ParseRatError> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(fail());
            }
            t.parse::<BigInt>().map_err(|_| fail())
        };
        match s.split_once('/') {
            None => Ok(Rat::integer(int(s)?)),
            Some((p, q)) => {
                let q = int(q)?;
                if !q.is_positive() {
                    return Err(fail());
                }
                Ok(Rat::new(int(p)?, q))
            }
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// A rational or the `-inf` sentinel, ordered below every rational.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRat {
    NegInf,
    Finite(Rat),
}

impl ExtRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::NegInf => None,
            ExtRat::Finite(r) => Some(r),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => f.write_str("-inf"),
            ExtRat::Finite(r) => r.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_notation() {
        assert_eq!(Rat::new(6, -4).to_string(), "-3/2");
        assert_eq!(Rat::new(4, 2).to_string(), "2");
        assert_eq!("10/4".parse::<Rat>().unwrap(), Rat::new(5, 2));
        assert_eq!("-7".parse::<Rat>().unwrap(), Rat::integer(-7));
        for bad in ["", "1/0", "1/-2", "a", "1/2/3", "+1", "1.5"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn sentinel_orders_below_everything() {
        assert!(ExtRat::NegInf < ExtRat::Finite(Rat::integer(-1_000_000)));
        assert!(ExtRat::Finite(Rat::zero()) < ExtRat::Finite(Rat::one()));
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(Rat::pow2(-3), Rat::new(1, 8));
        assert_eq!(Rat::pow2(4), Rat::integer(16));
        assert_eq!(Rat::new(12, 5).two_adic_valuation(), Some(2));
        assert_eq!(Rat::new(3, 8).two_adic_valuation(), Some(-3));
        assert_eq!(Rat::zero().two_adic_valuation(), None);
    }
}
