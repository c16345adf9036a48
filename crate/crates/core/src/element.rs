//! Elements of the skein algebra written in the multicurve basis.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::scalar::LaurentScalar;
use crate::words::{Letter, Multicurve};

/// A finite linear combination of multicurves with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SkeinElement {
    terms: BTreeMap<Multicurve, LaurentScalar>,
}

impl SkeinElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The empty multicurve, i.e. the unit of the algebra.
    pub fn one() -> Self {
        Self::term(Multicurve::empty(), LaurentScalar::one())
    }

    pub fn term(mc: Multicurve, c: LaurentScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(mc, c);
        e
    }

    pub fn add_term(&mut self, mc: Multicurve, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mc) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Multicurve, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mc: &Multicurve) -> LaurentScalar {
        self.terms.get(mc).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        let mut out = Self::zero();
        if c.is_zero() {
            return out;
        }
        for (mc, v) in &self.terms {
            out.add_term(mc.clone(), v * c);
        }
        out
    }

    pub fn add_scaled(&mut self, other: &SkeinElement, c: &LaurentScalar) {
        for (mc, v) in &other.terms {
            self.add_term(mc.clone(), v * c);
        }
    }

    /// Conjugates every coefficient, leaving multicurves alone.
    pub fn bar(&self) -> Self {
        let mut out = Self::zero();
        for (mc, v) in &self.terms {
            out.add_term(mc.clone(), v.bar());
        }
        out
    }

    /// Applies a symmetry of the ray system to every multicurve.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter + Copy) -> Self {
        let mut out = Self::zero();
        for (mc, v) in &self.terms {
            out.add_term(mc.map_letters(f), v.clone());
        }
        out
    }

    /// Largest multidegree, componentwise, over all terms.
    pub fn multidegree_bound(&self, n: usize) -> Vec<u32> {
        let mut md = vec![0; n];
        for mc in self.terms.keys() {
            for (a, b) in md.iter_mut().zip(mc.multidegree(n)) {
                *a = (*a).max(b);
            }
        }
        md
    }
}

impl std::ops::Add<&SkeinElement> for &SkeinElement {
    type Output = SkeinElement;
    fn add(self, rhs: &SkeinElement) -> SkeinElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentScalar::one());
        out
    }
}

impl std::ops::Sub<&SkeinElement> for &SkeinElement {
    type Output = SkeinElement;
    fn sub(self, rhs: &SkeinElement) -> SkeinElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &LaurentScalar::from_int(-1));
        out
    }
}

impl fmt::Debug for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// One term per line: `(coefficient) multicurve`.
impl fmt::Display for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mc, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({}) {}", c, mc)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    mc: Multicurve,
    coeff: LaurentScalar,
}

/// `{"terms":[{"mc":..., "coeff":...}, ...]}` sorted by multicurve.
impl Serialize for SkeinElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRecord> =
            self.terms.iter().map(|(mc, c)| TermRecord { mc: mc.clone(), coeff: c.clone() }).collect();
        let mut st = s.serialize_struct("SkeinElement", 1)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SkeinElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            terms: Vec<TermRecord>,
        }
        let raw = Raw::deserialize(d)?;
        let mut e = SkeinElement::zero();
        for t in raw.terms {
            e.add_term(t.mc, t.coeff);
        }
        Ok(e)
    }
}
