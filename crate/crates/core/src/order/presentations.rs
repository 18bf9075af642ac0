//! Built-in enumerated orders.
//!
//! The rational presentations all enumerate their elements without
//! repetition and can locate the index of any of their values:
//!
//! * `q`: `0, 1, -1, 1/2, -1/2, 2, -2, ...` via the Calkin-Wilf sequence;
//! * `dyadic`: `0, 1/2, -1/2, ...` via a pairing of odd numerators and
//!   powers of two;
//! * `unit-q`: the rationals of `(0, 1)` as `r / (1 + r)` over Calkin-Wilf;
//! * `q-nonzero`: `q` without its first element;
//! * `unit-dyadic`: `1/2, 1/4, 3/4, 1/8, ...` breadth first.
//!
//! `omega` and `omega2` are the well-orders `w` and `w*2`, the latter
//! interleaving its two copies.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{One, ToPrimitive};

use super::EnumeratedOrder;
use crate::rat::Rat;

pub const BUILTIN_NAMES: [&str; 7] = ["q", "dyadic", "unit-q", "q-nonzero", "unit-dyadic", "omega", "omega2"];

/// The built-in dense linear orders without endpoints.
pub const BUILTIN_DLOS: [&str; 5] = ["q", "dyadic", "unit-q", "q-nonzero", "unit-dyadic"];

pub fn builtin(name: &str) -> Option<Box<dyn EnumeratedOrder + Send + Sync>> {
    Some(match name {
        "q" => Box::new(Rationals),
        "dyadic" => Box::new(Dyadics),
        "unit-q" => Box::new(UnitRationals),
        "q-nonzero" => Box::new(NonzeroRationals),
        "unit-dyadic" => Box::new(UnitDyadics),
        "omega" => Box::new(Omega),
        "omega2" => Box::new(OmegaTwo),
        _ => return None,
    })
}

/// Stern's diatomic sequence.
fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n != 0 {
        if n & 1 == 0 {
            a += b;
        } else {
            b += a;
        }
        n >>= 1;
    }
    b
}

/// The `k`-th Calkin-Wilf rational (`k >= 1`) as `(numerator, denominator)`.
fn calkin_wilf(k: u64) -> (u64, u64) {
    (fusc(k), fusc(k + 1))
}

/// Inverse of [`calkin_wilf`] for a positive reduced fraction.
fn calkin_wilf_index(p: &BigInt, q: &BigInt) -> Option<u64> {
    let (mut p, mut q) = (p.to_u128()?, q.to_u128()?);
    if p == 0 || q == 0 {
        return None;
    }
    // Walk up to the root recording runs of left (0) and right (1) moves.
    let mut runs: Vec<(u128, bool)> = Vec::new();
    while p != q {
        if p < q {
            let steps = if q % p == 0 { q / p - 1 } else { q / p };
            q -= steps * p;
            runs.push((steps, false));
        } else {
            let steps = if p % q == 0 { p / q - 1 } else { p / q };
            p -= steps * q;
            runs.push((steps, true));
        }
    }
    if p != 1 {
        return None;
    }
    let mut k: u64 = 1;
    let mut bits: u128 = 1;
    for &(steps, right) in runs.iter().rev() {
        bits += steps;
        if bits > 63 {
            return None;
        }
        let s = steps as u32;
        k <<= s;
        if right {
            k |= (1u64 << s) - 1;
        }
    }
    Some(k)
}

fn small_rat((p, q): (u64, u64), negative: bool) -> Rat {
    let p = BigInt::from(p);
    Rat::new(if negative { -p } else { p }, q)
}

/// Cross-multiplied comparison of signed small fractions.
fn cmp_small(a: (i8, u64, u64), b: (i8, u64, u64)) -> Ordering {
    let side = |(s, p, _): (i8, u64, u64), (_, _, q): (i8, u64, u64)| s as i128 * (p as u128 * q as u128) as i128;
    side(a, b).cmp(&side(b, a))
}

/// All of `Q`, enumerated `0, 1, -1, 1/2, -1/2, 2, -2, 1/3, ...`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Rationals {
    fn small(i: usize) -> (i8, u64, u64) {
        if i == 0 {
            return (0, 0, 1);
        }
        let k = (i as u64).div_ceil(2);
        let (p, q) = calkin_wilf(k);
        (if i % 2 == 1 { 1 } else { -1 }, p, q)
    }

    pub fn value(i: usize) -> Rat {
        let (s, p, q) = Self::small(i);
        small_rat((p, q), s < 0)
    }

    pub fn index_of(value: &Rat) -> Option<usize> {
        let k = match value.numer().sign() {
            Sign::NoSign => return Some(0),
            _ => calkin_wilf_index(&value.numer().magnitude().clone().into(), value.denom())?,
        };
        let i = if value.is_positive() { 2 * k - 1 } else { 2 * k };
        usize::try_from(i).ok()
    }
}

impl EnumeratedOrder for Rationals {
    fn len(&self) -> Option<usize> {
        None
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        Some(cmp_small(Self::small(i), Self::small(j)))
    }
    fn name(&self) -> String {
        String::from("q")
    }
    fn rational(&self, i: usize) -> Option<Rat> {
        Some(Self::value(i))
    }
    fn locate(&self, value: &Rat) -> Option<usize> {
        Self::index_of(value)
    }
}

/// `Q` without zero; `a_i` is the `(i+1)`-th element of [`Rationals`].
#[derive(Debug, Clone, Copy, Default)]
pub struct NonzeroRationals;

impl EnumeratedOrder for NonzeroRationals {
    fn len(&self) -> Option<usize> {
        None
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        Some(cmp_small(Rationals::small(i + 1), Rationals::small(j + 1)))
    }
    fn name(&self) -> String {
        String::from("q-nonzero")
    }
    fn rational(&self, i: usize) -> Option<Rat> {
        Some(Rationals::value(i + 1))
    }
    fn locate(&self, value: &Rat) -> Option<usize> {
        Rationals::index_of(value)?.checked_sub(1)
    }
}

/// `Q` intersected with `(0, 1)`, via the order isomorphism `r -> r/(1+r)`
/// from the positive rationals.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitRationals;

impl UnitRationals {
    fn small(i: usize) -> (i8, u64, u64) {
        let (p, q) = calkin_wilf(i as u64 + 1);
        (1, p, p + q)
    }
}

impl EnumeratedOrder for UnitRationals {
    fn len(&self) -> Option<usize> {
        None
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        Some(cmp_small(Self::small(i), Self::small(j)))
    }
    fn name(&self) -> String {
        String::from("unit-q")
    }
    fn rational(&self, i: usize) -> Option<Rat> {
        let (_, p, q) = Self::small(i);
        Some(small_rat((p, q), false))
    }
    fn locate(&self, value: &Rat) -> Option<usize> {
        if !value.is_positive() || value >= &Rat::one() {
            return None;
        }
        // u = p/q  ->  r = p/(q-p)
        let p = value.numer();
        let rest = value.denom() - p;
        let k = calkin_wilf_index(p, &rest)?;
        usize::try_from(k - 1).ok()
    }
}

fn cantor_unpair(m: u128) -> (u128, u128) {
    let w = ((8 * m + 1).isqrt() - 1) / 2;
    let t = m - w * (w + 1) / 2;
    (w - t, t)
}

fn cantor_pair(s: u128, t: u128) -> Option<u128> {
    let w = s.checked_add(t)?;
    w.checked_mul(w + 1)?.checked_div(2)?.checked_add(t)
}

/// Dyadic rationals `m / 2^k`, enumerated `0, d1, -d1, d2, -d2, ...` where
/// `d_n = (2s+1) * 2^z(t)` for `(s, t)` the Cantor unpairing of `n - 1` and
/// `z` the zigzag `0 -> -1, 1 -> 0, 2 -> -2, 3 -> 1, ...`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dyadics;

impl Dyadics {
    fn positive(n: u128) -> Rat {
        let (s, t) = cantor_unpair(n - 1);
        let exp: i64 = if t % 2 == 0 {
            -((t / 2) as i64 + 1)
        } else {
            ((t - 1) / 2) as i64
        };
        Rat::integer(BigInt::from(2 * s + 1)) * Rat::pow2(exp)
    }

    pub fn value(i: usize) -> Rat {
        if i == 0 {
            return Rat::zero();
        }
        let n = (i as u128).div_ceil(2);
        let d = Self::positive(n);
        if i % 2 == 1 {
            d
        } else {
            -d
        }
    }

    pub fn index_of(value: &Rat) -> Option<usize> {
        if value.is_zero() {
            return Some(0);
        }
        let den = value.denom();
        if (den & (den - BigInt::one())) != BigInt::ZERO {
            return None;
        }
        let abs = value.abs();
        let exp = abs.two_adic_valuation()?;
        let odd = (abs * Rat::pow2(-exp)).numer().to_u128()?;
        let s = (odd - 1) / 2;
        let t: u128 = if exp >= 0 {
            2 * exp as u128 + 1
        } else {
            2 * ((-exp) as u128 - 1)
        };
        let n = cantor_pair(s, t)?.checked_add(1)?;
        let i = if value.is_positive() { 2 * n - 1 } else { 2 * n };
        usize::try_from(i).ok()
    }
}

impl EnumeratedOrder for Dyadics {
    fn len(&self) -> Option<usize> {
        None
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        Some(Self::value(i).cmp(&Self::value(j)))
    }
    fn name(&self) -> String {
        String::from("dyadic")
    }
    fn rational(&self, i: usize) -> Option<Rat> {
        Some(Self::value(i))
    }
    fn locate(&self, value: &Rat) -> Option<usize> {
        Self::index_of(value)
    }
}

/// Dyadic rationals of `(0, 1)` in breadth-first order of the bisection
/// tree: `1/2, 1/4, 3/4, 1/8, 3/8, ...`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitDyadics;

impl UnitDyadics {
    fn small(i: usize) -> (i8, u64, u64) {
        let n = i as u64 + 1;
        let depth = 63 - n.leading_zeros();
        let odd = 2 * (n - (1u64 << depth)) + 1;
        (1, odd, 1u64 << (depth + 1))
    }
}

impl EnumeratedOrder for UnitDyadics {
    fn len(&self) -> Option<usize> {
        None
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        Some(cmp_small(Self::small(i), Self::small(j)))
    }
    fn name(&self) -> String {
        String::from("unit-dyadic")
    }
    fn rational(&self, i: usize) -> Option<Rat> {
        let (_, p, q) = Self::small(i);
        Some(small_rat((p, q), false))
    }
    fn locate(&self, value: &Rat) -> Option<usize> {
        if !value.is_positive() || value >= &Rat::one() {
            return None;
        }
        let den = value.denom().to_u64()?;
        if !den.is_power_of_two() {
            return None;
        }
        let depth = den.trailing_zeros() - 1;
        let odd = value.numer().to_u64()?;
        usize::try_from((1u64 << depth) + (odd - 1) / 2 - 1).ok()
    }
}

/// The naturals in their natural order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Omega;

impl EnumeratedOrder for Omega {
    fn len(&self) -> Option<usize> {
        None
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        Some(i.cmp(&j))
    }
    fn name(&self) -> String {
        String::from("omega")
    }
    fn rational(&self, i: usize) -> Option<Rat> {
        Some(Rat::integer(i as u64))
    }
    fn locate(&self, value: &Rat) -> Option<usize> {
        if value.is_integer() && !value.is_negative() {
            value.numer().to_usize()
        } else {
            None
        }
    }
}

/// Two copies of `w` one after the other; even indices enumerate the first
/// copy and odd indices the second.
#[derive(Debug, Clone, Copy, Default)]
pub struct OmegaTwo;

impl EnumeratedOrder for OmegaTwo {
    fn len(&self) -> Option<usize> {
        None
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        Some((i % 2, i / 2).cmp(&(j % 2, j / 2)))
    }
    fn name(&self) -> String {
        String::from("omega2")
    }
    fn describe(&self, i: usize) -> String {
        if i.is_multiple_of(2) {
            alloc::format!("{}", i / 2)
        } else {
            alloc::format!("w+{}", i / 2)
        }
    }
}

/// A finite order given by element names and an explicit strict relation.
/// Pairs the relation says nothing about compare as `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrder {
    names: Vec<String>,
    less: BTreeMap<(usize, usize), bool>,
}

impl FiniteOrder {
    /// `pairs` lists `(i, j)` meaning `a_i < a_j`.
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, usize> {
        let n = names.len();
        let mut less = BTreeMap::new();
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(i.max(j));
            }
            less.insert((i, j), true);
            less.entry((j, i)).or_insert(false);
        }
        Ok(FiniteOrder { names, less })
    }

    /// The order on `0..keys.len()` induced by distinct integer keys.
    pub fn from_keys(keys: &[i64]) -> Self {
        let names = (0..keys.len()).map(|i| alloc::format!("a{i}")).collect();
        let mut less = BTreeMap::new();
        for i in 0..keys.len() {
            for j in 0..keys.len() {
                if i != j && keys[i] != keys[j] {
                    less.insert((i, j), keys[i] < keys[j]);
                }
            }
        }
        FiniteOrder { names, less }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Pairs `(i, j)` with `a_i < a_j` as recorded.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.less
            .iter()
            .filter(|(_, &lt)| lt)
            .map(|(&(i, j), _)| (i, j))
            .collect()
    }
}

impl EnumeratedOrder for FiniteOrder {
    fn len(&self) -> Option<usize> {
        Some(self.names.len())
    }
    fn compare(&self, i: usize, j: usize) -> Option<Ordering> {
        if i == j {
            return Some(Ordering::Equal);
        }
        let ij = self.less.get(&(i, j)).copied().unwrap_or(false);
        let ji = self.less.get(&(j, i)).copied().unwrap_or(false);
        match (ij, ji) {
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            _ => None,
        }
    }
    fn name(&self) -> String {
        String::from("finite")
    }
    fn describe(&self, i: usize) -> String {
        self.names.get(i).cloned().unwrap_or_else(|| alloc::format!("a{i}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::check_axioms;
    use alloc::string::ToString;

    #[test]
    fn rational_prefixes() {
        let first: Vec<String> = (0..7).map(|i| Rationals::value(i).to_string()).collect();
        assert_eq!(first, ["0", "1", "-1", "1/2", "-1/2", "2", "-2"]);
        let dy: Vec<String> = (0..3).map(|i| Dyadics::value(i).to_string()).collect();
        assert_eq!(dy, ["0", "1/2", "-1/2"]);
        let ud: Vec<String> = (0..5).map(|i| UnitDyadics.rational(i).unwrap().to_string()).collect();
        assert_eq!(ud, ["1/2", "1/4", "3/4", "1/8", "3/8"]);
        let uq: Vec<String> = (0..3).map(|i| UnitRationals.rational(i).unwrap().to_string()).collect();
        assert_eq!(uq, ["1/2", "1/3", "2/3"]);
    }

    #[test]
    fn locate_inverts_the_enumeration() {
        for name in BUILTIN_NAMES {
            let p = builtin(name).unwrap();
            for i in 0..2000 {
                if let Some(v) = p.rational(i) {
                    assert_eq!(p.locate(&v), Some(i), "{name} index {i} value {v}");
                }
            }
        }
    }

    #[test]
    fn locate_rejects_non_members() {
        assert_eq!(Dyadics.locate(&Rat::new(1, 3)), None);
        assert_eq!(UnitRationals.locate(&Rat::one()), None);
        assert_eq!(UnitDyadics.locate(&Rat::new(3, 2)), None);
        assert_eq!(NonzeroRationals.locate(&Rat::zero()), None);
        assert_eq!(Omega.locate(&Rat::new(1, 2)), None);
        assert!(Rationals.locate(&Rat::new(355, 113)).is_some());
    }

    #[test]
    fn builtins_are_linear_orders() {
        for name in BUILTIN_NAMES {
            let p = builtin(name).unwrap();
            assert!(check_axioms(&p, 200).passed(), "{name}");
        }
    }

    #[test]
    fn omega_two_interleaves() {
        assert_eq!(OmegaTwo.compare(1, 2), Some(Ordering::Greater));
        assert_eq!(OmegaTwo.compare(2, 4), Some(Ordering::Less));
        assert_eq!(OmegaTwo.describe(3), "w+1");
    }
}
