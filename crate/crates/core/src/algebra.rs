//! The free algebra on the curve generators `t_S` and its evaluation into
//! the multicurve basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::SkeinElement;
use crate::error::SkeinError;
use crate::geometry::OffsetSchedule;
use crate::oracle::resolve_monomial;
use crate::scalar::LaurentScalar;
use crate::words::{CurveWord, Letter};

/// The curve `t_S` around a nonempty set of punctures `S`, as a bitmask
/// (bit `i - 1` for puncture `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator(u16);

impl Generator {
    pub fn new(punctures: &[u8]) -> Result<Self, SkeinError> {
        let mut mask = 0u16;
        for &p in punctures {
            if p == 0 || p > 16 || mask & (1 << (p - 1)) != 0 {
                return Err(SkeinError::InvalidSubset { subset: punctures.to_vec(), n: 16 });
            }
            mask |= 1 << (p - 1);
        }
        if mask == 0 {
            return Err(SkeinError::InvalidSubset { subset: Vec::new(), n: 16 });
        }
        Ok(Generator(mask))
    }

    /// Shorthand for literals such as `Generator::of(124)`; digits are punctures.
    pub fn of(digits: u32) -> Self {
        let ps: Vec<u8> = digits.to_string().bytes().map(|b| b - b'0').collect();
        Self::new(&ps).expect("valid digit literal")
    }

    /// `t_0`, the curve around all `n` punctures.
    pub fn full(n: usize) -> Self {
        Generator(((1u32 << n) - 1) as u16)
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn punctures(self) -> Vec<u8> {
        (1..=16u8).filter(|&i| self.0 & (1 << (i - 1)) != 0).collect()
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn max_puncture(self) -> u8 {
        16 - self.0.leading_zeros() as u8
    }

    pub fn contains(self, i: u8) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    pub fn is_subset_of(self, other: Generator) -> bool {
        self.0 & !other.0 == 0
    }

    /// Single punctures and the full set are central.
    pub fn is_central(self, n: usize) -> bool {
        self.size() == 1 || self == Generator::full(n)
    }

    pub fn word(self) -> CurveWord {
        CurveWord::standard(&self.punctures())
    }

    /// Image under a permutation of puncture labels.
    pub fn relabel(self, f: impl Fn(u8) -> u8) -> Self {
        let ps: Vec<u8> = self.punctures().into_iter().map(f).collect();
        Generator::new(&ps).expect("bijective relabelling")
    }

    pub fn name(self, n: usize) -> String {
        if self == Generator::full(n) && n > 1 {
            "t0".to_string()
        } else {
            let mut s = String::from("t");
            for p in self.punctures() {
                s.push_str(&p.to_string());
            }
            s
        }
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// By size, then lexicographically: `t1 < ... < t4 < t12 < t13 < ... < t234 < t1234`.
impl Ord for Generator {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.size().cmp(&other.size()).then_with(|| self.punctures().cmp(&other.punctures()))
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name(4))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name(4))
    }
}

/// A word in the generators; the empty word is `1`.
pub type Monomial = Vec<Generator>;

/// Multidegree of a monomial: how many factors enclose each puncture.
pub fn monomial_multidegree(m: &[Generator], n: usize) -> Vec<u32> {
    let mut md = vec![0u32; n];
    for g in m {
        for p in g.punctures() {
            if (p as usize) <= n {
                md[p as usize - 1] += 1;
            }
        }
    }
    md
}

pub fn monomial_degree(m: &[Generator]) -> u32 {
    m.iter().map(|g| g.size()).sum()
}

/// The cyclic relabelling `1 -> 2 -> ... -> n -> 1`, applied `k` times.
pub fn cyclic(i: u8, k: usize, n: usize) -> u8 {
    ((i as usize - 1 + k) % n + 1) as u8
}

/// The reflection `i -> n + 1 - i`.
pub fn reflect(i: u8, n: usize) -> u8 {
    (n + 1 - i as usize) as u8
}

/// How the cyclic relabelling acts on ray letters: signs are kept.
pub fn cyclic_letter(l: Letter, k: usize, n: usize) -> Letter {
    Letter::new(cyclic(l.index(), k, n), l.is_positive())
}

/// How the reflection acts on ray letters: left and right swap.
pub fn reflect_letter(l: Letter, n: usize) -> Letter {
    Letter::new(reflect(l.index(), n), !l.is_positive())
}

/// A noncommutative polynomial over `Z[q^{1/2}, q^{-1/2}]` in the generators.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct GenPolynomial {
    terms: BTreeMap<Monomial, LaurentScalar>,
}

impl GenPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(LaurentScalar::one())
    }

    pub fn scalar(c: LaurentScalar) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(vec![g], LaurentScalar::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, LaurentScalar::one())
    }

    /// Product of generator literals, e.g. `GenPolynomial::gens(&[12, 23])`.
    pub fn gens(digits: &[u32]) -> Self {
        Self::monomial(digits.iter().map(|&d| Generator::of(d)).collect())
    }

    pub fn term(m: Monomial, c: LaurentScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &[Generator]) -> LaurentScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// If this is a single term, returns it.
    pub fn as_term(&self) -> Option<(&Monomial, &LaurentScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn add_scaled(&mut self, other: &GenPolynomial, c: &LaurentScalar) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    /// Reverses every monomial and conjugates every coefficient.
    pub fn mirror(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.iter().rev().copied().collect(), c.bar());
        }
        out
    }

    /// Relabels punctures by the `k`-th power of `i -> i + 1 (mod n)`.
    pub fn permute(&self, k: usize, n: usize) -> Self {
        self.map_generators(|g| g.relabel(|i| cyclic(i, k, n)))
    }

    /// Relabels punctures by `i -> n + 1 - i` and conjugates coefficients;
    /// stacking order is kept.
    pub fn reflect(&self, n: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.iter().map(|g| g.relabel(|i| reflect(i, n))).collect(), c.bar());
        }
        out
    }

    pub fn map_generators(&self, f: impl Fn(Generator) -> Generator) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.iter().map(|&g| f(g)).collect(), c.clone());
        }
        out
    }

    /// Componentwise maximum of the monomial multidegrees.
    pub fn multidegree(&self, n: usize) -> Vec<u32> {
        let mut md = vec![0u32; n];
        for m in self.terms.keys() {
            for (a, b) in md.iter_mut().zip(monomial_multidegree(m, n)) {
                *a = (*a).max(b);
            }
        }
        md
    }

    pub fn fmt_with(&self, n: usize) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = m.iter().map(|g| g.name(n)).collect();
            let (neg, mag) = if c.terms().len() == 1 && c.terms()[0].1 < 0.into() { (true, -c) } else { (false, c.clone()) };
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let coeff = if mag.is_one() {
                None
            } else if mag.terms().len() == 1 {
                Some(mag.to_string())
            } else {
                Some(format!("({})", mag))
            };
            match (coeff, mono.is_empty()) {
                (None, true) => out.push('1'),
                (None, false) => out.push_str(&mono.join("*")),
                (Some(c), true) => out.push_str(&c),
                (Some(c), false) => {
                    out.push_str(&c);
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }
}

impl fmt::Debug for GenPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(4))
    }
}

/// Expression syntax, assuming four punctures for the `t0` shorthand.
impl fmt::Display for GenPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(4))
    }
}

impl std::ops::Add<&GenPolynomial> for &GenPolynomial {
    type Output = GenPolynomial;
    fn add(self, rhs: &GenPolynomial) -> GenPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentScalar::one());
        out
    }
}

impl std::ops::Sub<&GenPolynomial> for &GenPolynomial {
    type Output = GenPolynomial;
    fn sub(self, rhs: &GenPolynomial) -> GenPolynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentScalar::from_int(-1));
        out
    }
}

impl std::ops::Neg for &GenPolynomial {
    type Output = GenPolynomial;
    fn neg(self) -> GenPolynomial {
        self.scale(&LaurentScalar::from_int(-1))
    }
}

impl std::ops::Mul<&GenPolynomial> for &GenPolynomial {
    type Output = GenPolynomial;
    fn mul(self, rhs: &GenPolynomial) -> GenPolynomial {
        let mut out = GenPolynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl std::ops::Mul<&LaurentScalar> for &GenPolynomial {
    type Output = GenPolynomial;
    fn mul(self, rhs: &LaurentScalar) -> GenPolynomial {
        self.scale(rhs)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<GenPolynomial> for GenPolynomial {
            type Output = GenPolynomial;
            fn $m(self, rhs: GenPolynomial) -> GenPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl std::ops::$tr<&GenPolynomial> for GenPolynomial {
            type Output = GenPolynomial;
            fn $m(self, rhs: &GenPolynomial) -> GenPolynomial {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl std::ops::Neg for GenPolynomial {
    type Output = GenPolynomial;
    fn neg(self) -> GenPolynomial {
        -&self
    }
}

impl From<LaurentScalar> for GenPolynomial {
    fn from(c: LaurentScalar) -> Self {
        GenPolynomial::scalar(c)
    }
}

impl From<Generator> for GenPolynomial {
    fn from(g: Generator) -> Self {
        GenPolynomial::generator(g)
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.punctures().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<u8> = Vec::deserialize(d)?;
        Generator::new(&v).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTerm {
    coeff: LaurentScalar,
    mono: Vec<Vec<u8>>,
}

/// Serialized as `[{"coeff": scalar, "mono": [[1,2],[2,3]]}, ...]`.
impl Serialize for GenPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<PolyTerm> = self
            .terms
            .iter()
            .map(|(m, c)| PolyTerm { coeff: c.clone(), mono: m.iter().map(|g| g.punctures()).collect() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<PolyTerm> = Vec::deserialize(d)?;
        let mut p = GenPolynomial::zero();
        for t in v {
            let m = t
                .mono
                .iter()
                .map(|s| Generator::new(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(serde::de::Error::custom)?;
            p.add_term(m, t.coeff);
        }
        Ok(p)
    }
}

/// Evaluates free-algebra elements through the diagram oracle, caching
/// every monomial it has resolved. Safe to share between threads.
pub struct Evaluator {
    n: usize,
    schedule: OffsetSchedule,
    cache: RwLock<HashMap<Monomial, Arc<SkeinElement>>>,
    factor_centrals: bool,
}

impl Evaluator {
    pub fn new(n: usize) -> Self {
        Self::with_schedule(n, OffsetSchedule::default())
    }

    pub fn with_schedule(n: usize, schedule: OffsetSchedule) -> Self {
        Evaluator { n, schedule, cache: RwLock::new(HashMap::new()), factor_centrals: false }
    }

    /// Peripheral generators are split off and added as disjoint components
    /// instead of being drawn. Exact, since they are central and bound a
    /// puncture; much faster on monomials with many of them. The plain
    /// evaluator draws them, which is what the centrality relations test.
    pub fn factoring_centrals(mut self) -> Self {
        self.factor_centrals = true;
        self
    }

    pub fn factors_centrals(&self) -> bool {
        self.factor_centrals
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn schedule(&self) -> &OffsetSchedule {
        &self.schedule
    }

    pub fn cached_monomials(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    fn check(&self, m: &[Generator]) -> Result<(), SkeinError> {
        for g in m {
            if g.max_puncture() as usize > self.n {
                return Err(SkeinError::InvalidSubset { subset: g.punctures(), n: self.n });
            }
        }
        Ok(())
    }

    pub fn evaluate_monomial(&self, m: &[Generator]) -> Result<Arc<SkeinElement>, SkeinError> {
        if let Some(e) = self.cache.read().unwrap().get(m) {
            return Ok(e.clone());
        }
        self.check(m)?;
        if self.factor_centrals && m.iter().any(|g| g.is_central(self.n)) {
            let body: Monomial = m.iter().copied().filter(|g| !g.is_central(self.n)).collect();
            let inner = self.evaluate_monomial(&body)?;
            let mut e = SkeinElement::zero();
            for (mc, c) in inner.iter() {
                let mut mc = mc.clone();
                for g in m.iter().filter(|g| g.is_central(self.n)) {
                    mc.insert(g.word());
                }
                e.add_term(mc, c.clone());
            }
            let e = Arc::new(e);
            self.cache.write().unwrap().insert(m.to_vec(), e.clone());
            return Ok(e);
        }
        let subsets: Vec<Vec<u8>> = m.iter().map(|g| g.punctures()).collect();
        let e = Arc::new(resolve_monomial(&subsets, self.n, &self.schedule)?);
        self.cache.write().unwrap().insert(m.to_vec(), e.clone());
        Ok(e)
    }

    /// The linear extension of monomial evaluation.
    pub fn evaluate(&self, p: &GenPolynomial) -> Result<SkeinElement, SkeinError> {
        let missing: Vec<&Monomial> = {
            let cache = self.cache.read().unwrap();
            p.monomials().filter(|m| !cache.contains_key(*m)).collect()
        };
        if missing.len() > 1 {
            missing.par_iter().map(|m| self.evaluate_monomial(m).map(|_| ())).collect::<Result<Vec<_>, _>>()?;
        }
        let mut out = SkeinElement::zero();
        for (m, c) in p.terms() {
            out.add_scaled(self.evaluate_monomial(m)?.as_ref(), c);
        }
        Ok(out)
    }

    /// Whether `p` and `r` agree in the skein algebra; the residual is
    /// `evaluate(p - r)`.
    pub fn equals(&self, p: &GenPolynomial, r: &GenPolynomial) -> Result<(bool, SkeinElement), SkeinError> {
        let residual = self.evaluate(&(p - r))?;
        Ok((residual.is_zero(), residual))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Multicurve;

    fn g(d: u32) -> GenPolynomial {
        GenPolynomial::gens(&[d])
    }

    fn q() -> LaurentScalar {
        LaurentScalar::q()
    }

    #[test]
    fn generator_order() {
        let order: Vec<Generator> =
            [1, 2, 3, 4, 12, 13, 14, 23, 24, 34, 123, 124, 134, 234, 1234].iter().map(|&d| Generator::of(d)).collect();
        for w in order.windows(2) {
            assert!(w[0] < w[1], "{:?} < {:?}", w[0], w[1]);
        }
        assert_eq!(Generator::full(4), Generator::of(1234));
        assert!(Generator::of(1234).is_central(4));
        assert!(Generator::of(3).is_central(4));
        assert!(!Generator::of(123).is_central(4));
    }

    #[test]
    fn mirror_examples() {
        let p = GenPolynomial::gens(&[12, 23]).scale(&q());
        assert_eq!(p.mirror(), GenPolynomial::gens(&[23, 12]).scale(&LaurentScalar::qbar()));
        let a = g(1234).scale(&LaurentScalar::alpha());
        assert_eq!(a.mirror(), a);
    }

    #[test]
    fn permute_examples() {
        assert_eq!(GenPolynomial::gens(&[14, 234]).permute(1, 4), GenPolynomial::gens(&[12, 134]));
        for k in 1..4 {
            assert_eq!(g(1234).permute(k, 4), g(1234));
        }
        assert_eq!(g(13).permute(1, 4), g(24));
        assert_eq!(g(13).permute(4, 4), g(13));
    }

    #[test]
    fn evaluate_basics() {
        let ev = Evaluator::new(4);
        let t1 = ev.evaluate(&g(1)).unwrap();
        let mc1 = Multicurve::single(CurveWord::standard(&[1]));
        assert_eq!(t1, SkeinElement::term(mc1, LaurentScalar::one()));
        assert_eq!(ev.evaluate(&GenPolynomial::one()).unwrap(), SkeinElement::one());
        assert!(ev.evaluate(&GenPolynomial::zero()).unwrap().is_zero());
    }

    #[test]
    fn equals_examples() {
        let ev = Evaluator::new(4);
        assert!(ev.equals(&GenPolynomial::gens(&[1, 2]), &GenPolynomial::gens(&[2, 1])).unwrap().0);
        let (same, residual) = ev.equals(&GenPolynomial::gens(&[12, 23]), &GenPolynomial::gens(&[23, 12])).unwrap();
        assert!(!same);
        // the t13 part of the difference is (q^-1 - q) t13
        let t13 = Multicurve::single(CurveWord::standard(&[1, 3]));
        assert_eq!(residual.coefficient(&t13), LaurentScalar::qbar() - q());
        let p = GenPolynomial::gens(&[1234, 1234]).scale(&q());
        assert!(ev.equals(&p, &p).unwrap().0);
    }

    #[test]
    fn out_of_range_generator() {
        let ev = Evaluator::new(3);
        assert!(ev.evaluate(&g(14)).is_err());
    }

    #[test]
    fn json_shape() {
        let p = GenPolynomial::gens(&[12, 23]).scale(&q());
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"[{"coeff":[[2,1]],"mono":[[1,2],[2,3]]}]"#);
        let back: GenPolynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
