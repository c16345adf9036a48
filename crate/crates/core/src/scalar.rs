//! The coefficient ring `Z[q^{1/2}, q^{-1/2}]`.
//!
//! Exponents are stored in units of `q^{1/2}`, so `q` is the half-exponent 2.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// An exact Laurent polynomial in `s = q^{1/2}` with integer coefficients.
///
/// Terms are kept sorted by half-exponent with no zero coefficients, so the
/// derived equality is equality in the ring.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    terms: Vec<(i64, BigInt)>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn from_int<T: Into<BigInt>>(c: T) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^{half_exp / 2}`.
    pub fn monomial<T: Into<BigInt>>(c: T, half_exp: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(half_exp, c)] }
        }
    }

    /// `q^{1/2}`
    pub fn s() -> Self {
        Self::monomial(1, 1)
    }

    pub fn q() -> Self {
        Self::monomial(1, 2)
    }

    /// `q^{-1}`
    pub fn qbar() -> Self {
        Self::monomial(1, -2)
    }

    /// `q^k` for integer `k`.
    pub fn q_pow(k: i64) -> Self {
        Self::monomial(1, 2 * k)
    }

    /// `alpha = q + q^{-1}`
    pub fn alpha() -> Self {
        Self::from_terms([(-2, 1), (2, 1)])
    }

    /// Value of a contractible loop, `-q - q^{-1}`.
    pub fn delta() -> Self {
        Self::from_terms([(-2, -1), (2, -1)])
    }

    /// Builds a scalar from `(half_exponent, coefficient)` pairs, combining
    /// repeated exponents.
    pub fn from_terms<I, T>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
        T: Into<BigInt>,
    {
        let mut v: Vec<(i64, BigInt)> = terms.into_iter().map(|(k, c)| (k, c.into())).collect();
        v.sort_by_key(|(k, _)| *k);
        let mut out: Vec<(i64, BigInt)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => *lc += c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// True for `±q^{k/2}`, the units of the ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.abs().is_one()
    }

    /// If the scalar is a unit `±q^{k/2}`, returns its inverse.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.is_unit() {
            let (k, c) = &self.terms[0];
            Some(Self { terms: vec![(-k, c.clone())] })
        } else {
            None
        }
    }

    /// The bar involution `q^{1/2} -> q^{-1/2}`.
    pub fn bar(&self) -> Self {
        let mut terms: Vec<(i64, BigInt)> = self.terms.iter().map(|(k, c)| (-k, c.clone())).collect();
        terms.reverse();
        Self { terms }
    }

    /// Integer power; negative exponents are only defined for units.
    pub fn pow(&self, e: i64) -> Option<Self> {
        if e < 0 {
            return self.unit_inverse().and_then(|inv| inv.pow(-e));
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }

    /// Evaluates at `q^{1/2} = x` for a nonzero rational `x`.
    pub fn specialize(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            let p = if *k >= 0 {
                num_traits::pow(x.clone(), *k as usize)
            } else {
                num_traits::pow(x.recip(), (-*k) as usize)
            };
            acc += p * BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Lowest and highest half-exponent, if nonzero.
    pub fn span(&self) -> Option<(i64, i64)> {
        Some((self.terms.first()?.0, self.terms.last()?.0))
    }

    fn merge(a: &[(i64, BigInt)], b: &[(i64, BigInt)], negate_b: bool) -> Vec<(i64, BigInt)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sb = |c: &BigInt| if negate_b { -c } else { c.clone() };
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, sb(&b[j].1)));
                j += 1;
            } else {
                let c = &a[i].1 + sb(&b[j].1);
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, k: i64) -> fmt::Result {
    if k % 2 == 0 {
        match k / 2 {
            1 => write!(f, "q"),
            e => write!(f, "q^{}", e),
        }
    } else if k == 1 {
        write!(f, "s")
    } else {
        write!(f, "s^{}", k)
    }
}

/// Prints in the expression syntax understood by the parser, e.g.
/// `q^2 - 2 + q^-2` or `3*s^3`.
impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest power first reads more naturally
        for (idx, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if *k == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                fmt_power(f, *k)?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for LaurentScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An arbitrary but fixed total order, used only for deterministic output.
impl Ord for LaurentScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl<'a> Add<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &'a LaurentScalar) -> LaurentScalar {
        LaurentScalar { terms: LaurentScalar::merge(&self.terms, &rhs.terms, false) }
    }
}

impl<'a> Sub<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &'a LaurentScalar) -> LaurentScalar {
        LaurentScalar { terms: LaurentScalar::merge(&self.terms, &rhs.terms, true) }
    }
}

impl<'a> Mul<&'a LaurentScalar> for &'a LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &'a LaurentScalar) -> LaurentScalar {
        if self.is_zero() || rhs.is_zero() {
            return LaurentScalar::zero();
        }
        if rhs.terms.len() == 1 && !self.terms.is_empty() {
            let (k, c) = &rhs.terms[0];
            return LaurentScalar { terms: self.terms.iter().map(|(a, b)| (a + k, b * c)).collect() };
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let mut dense = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                dense[(a + b - lo) as usize] += ca * cb;
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (lo + i as i64, c))
            .collect();
        LaurentScalar { terms }
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: LaurentScalar) -> LaurentScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: &'a LaurentScalar) -> LaurentScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<LaurentScalar> for &'a LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: LaurentScalar) -> LaurentScalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        self.terms = LaurentScalar::merge(&self.terms, &rhs.terms, false);
    }
}

impl AddAssign<LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: LaurentScalar) {
        *self += &rhs;
    }
}

impl SubAssign<&LaurentScalar> for LaurentScalar {
    fn sub_assign(&mut self, rhs: &LaurentScalar) {
        self.terms = LaurentScalar::merge(&self.terms, &rhs.terms, true);
    }
}

impl From<i64> for LaurentScalar {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl std::iter::Sum for LaurentScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Serialized as a sorted list of `[half_exponent, coefficient]` pairs.
/// Coefficients outside the `i64` range are written as decimal strings.
impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&(k, v))?,
                None => seq.serialize_element(&(k, c.to_string()))?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Int(i64),
            Text(String),
        }
        let raw: Vec<(i64, Coeff)> = Vec::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            let c = match c {
                Coeff::Int(v) => BigInt::from(v),
                Coeff::Text(s) => s.parse::<BigInt>().map_err(de::Error::custom)?,
            };
            terms.push((k, c));
        }
        Ok(Self::from_terms(terms))
    }
}
