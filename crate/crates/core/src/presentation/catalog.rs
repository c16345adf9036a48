//! The relation catalog for the four-punctured disk and its verification.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Evaluator, GenPolynomial, Generator};
use crate::element::SkeinElement;
use crate::error::SkeinError;
use crate::parse::parse_expression;
use crate::scalar::LaurentScalar;
use crate::words::{CurveWord, Multicurve};

use super::trace::trace_form;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    /// q-commutators of a 2-set generator with a 2- or 3-set generator.
    Commuting,
    /// Rewrites of crossing products into ordered monomials.
    Reduction,
    /// `t_v g = g t_v` for central `t_v`.
    Centrality,
    /// Commutation of generators whose curves can be made disjoint.
    Disjoint,
    /// Expansion identities used to obtain the relations above.
    Identity,
    /// Relations solved for by the oracle.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Name of the base relation this one is an image of.
    pub base: String,
    /// Power of the cyclic relabelling applied.
    pub power: u8,
    pub mirrored: bool,
    pub derived: bool,
    /// Set when the printed form had a misprint that the oracle exposed.
    #[serde(default)]
    pub corrected: bool,
}

/// `lhs = rhs + words`, where `words` collects terms whose curves are not
/// products of generators. For every relation used in rewriting, `words`
/// is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub kind: RelationKind,
    pub lhs: GenPolynomial,
    pub rhs: GenPolynomial,
    #[serde(default, skip_serializing_if = "SkeinElement::is_zero")]
    pub words: SkeinElement,
    pub provenance: Provenance,
}

impl Relation {
    pub fn new(name: impl Into<String>, kind: RelationKind, lhs: GenPolynomial, rhs: GenPolynomial) -> Self {
        let name = name.into();
        Relation {
            provenance: Provenance {
                base: name.clone(),
                power: 0,
                mirrored: false,
                derived: kind == RelationKind::Derived,
                corrected: false,
            },
            name,
            kind,
            lhs,
            rhs,
            words: SkeinElement::zero(),
        }
    }

    /// Parses both sides in the expression syntax.
    pub fn parsed(name: &str, kind: RelationKind, lhs: &str, rhs: &str) -> Self {
        let p = |s: &str| parse_expression(s, 4).unwrap_or_else(|e| panic!("relation {}: {}", name, e));
        Self::new(name, kind, p(lhs), p(rhs))
    }

    fn corrected(mut self) -> Self {
        self.provenance.corrected = true;
        self
    }

    fn with_words(mut self, words: SkeinElement) -> Self {
        self.words = words;
        self
    }

    /// `lhs - rhs`, the element that must lie in the kernel of evaluation.
    pub fn difference(&self) -> GenPolynomial {
        &self.lhs - &self.rhs
    }

    /// Image under the `k`-th power of the cyclic relabelling.
    pub fn permuted(&self, k: usize) -> Relation {
        let shift = |l| crate::algebra::cyclic_letter(l, k, 4);
        Relation {
            name: format!("{}.s{}", self.name, k),
            kind: self.kind,
            lhs: self.lhs.permute(k, 4),
            rhs: self.rhs.permute(k, 4),
            words: self.words.map_letters(shift),
            provenance: Provenance { power: ((self.provenance.power as usize + k) % 4) as u8, ..self.provenance.clone() },
        }
    }

    pub fn mirrored(&self) -> Relation {
        Relation {
            name: format!("{}.m", self.name),
            kind: self.kind,
            lhs: self.lhs.mirror(),
            rhs: self.rhs.mirror(),
            words: self.words.bar(),
            provenance: Provenance { mirrored: !self.provenance.mirrored, ..self.provenance.clone() },
        }
    }

    /// Image under `i -> 5 - i`, which conjugates coefficients but keeps
    /// stacking order.
    pub fn reflected(&self) -> Relation {
        Relation {
            name: format!("{}.r", self.name),
            kind: self.kind,
            lhs: self.lhs.reflect(4),
            rhs: self.rhs.reflect(4),
            words: self.words.map_letters(|l| crate::algebra::reflect_letter(l, 4)).bar(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn verify(&self, ev: &Evaluator) -> Result<VerifyReport, SkeinError> {
        let start = Instant::now();
        let value = ev.evaluate(&self.difference())?;
        let residual = &value - &self.words;
        Ok(VerifyReport {
            name: self.name.clone(),
            zero: residual.is_zero(),
            residual,
            ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = {}", self.name, self.lhs, self.rhs)?;
        for (mc, c) in self.words.iter() {
            write!(f, " + ({}) {}", c, mc)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub name: String,
    pub zero: bool,
    pub residual: SkeinElement,
    pub ms: f64,
}

/// The verified relation list.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RelationCatalog {
    pub relations: Vec<Relation>,
}

impl RelationCatalog {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn of_kind(&self, kind: RelationKind) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(move |r| r.kind == kind)
    }

    /// Verifies every relation in parallel; reports keep catalog order.
    pub fn verify_all(&self, ev: &Evaluator) -> Result<Vec<VerifyReport>, SkeinError> {
        self.relations.par_iter().map(|r| r.verify(ev)).collect()
    }

    /// One JSON record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.relations {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(src: &str) -> Result<Self, serde_json::Error> {
        let relations =
            src.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect::<Result<Vec<_>, _>>()?;
        Ok(RelationCatalog { relations })
    }
}

/// The `[2,2]` and `[2,3]` commuting relations before relabelling.
pub fn base_commuting() -> Vec<Relation> {
    use RelationKind::Commuting as K;
    vec![
        Relation::parsed(
            "[2,2]-1",
            K,
            "q*t23*t12 - q^-1*t12*t23",
            "(q^2 - q^-2)*t13 + (q - q^-1)*(t1*t3 + t2*t123)",
        ),
        Relation::parsed(
            "[2,2]-2",
            K,
            "t24*t13 - t13*t24",
            "(q^-2 - q^2)*(t12*t34 - t14*t23) + (q^-1 - q)*(t3*t4*t12 - t1*t4*t23 + t1*t2*t34 - t2*t3*t14)",
        ),
        Relation::parsed(
            "[2,3]-1",
            K,
            "q^-1*t234*t14 - q*t14*t234",
            "(q^-2 - q^2)*t123 + (q^-1 - q)*(t4*t0 + t1*t23)",
        ),
        Relation::parsed(
            "[2,3]-2",
            K,
            "q*t124*t34 - q^-1*t34*t124",
            "(q^2 - q^-2)*t123 + (q - q^-1)*(t4*t0 + t3*t12)",
        ),
        Relation::parsed(
            "[2,3]-3",
            K,
            "t134*t24 - t24*t134",
            "(q - q^-1)*(q^-1*t34*t124 - q*t14*t234 + q*t1*t23 - q^-1*t3*t12) + (q - q^-1)^2*(t4*t0 + A*t123)",
        ),
    ]
}

/// The reduction relations before relabelling and mirroring.
pub fn base_reductions() -> Vec<Relation> {
    use RelationKind::Reduction as K;
    vec![
        Relation::parsed(
            "red-1",
            K,
            "t13*t24",
            "A*t0 + t1*t234 + t2*t134 + t3*t124 + t4*t123 + q^2*t12*t34 + q^-2*t14*t23
             + q*t3*t4*t12 + q^-1*t1*t4*t23 + q*t1*t2*t34 + q^-1*t2*t3*t14 + t1*t2*t3*t4",
        ),
        Relation::parsed(
            "red-2",
            K,
            "t24*t134",
            "q^2*t14*t234 + q^-2*t34*t124 + (1 - q^2 - q^-2)*t4*t0 - (q^3 + q^-3)*t123 - q^2*t1*t23
             - q^-2*t3*t12 + t2*(q*t14*t34 - q^2*t13 - q*t4*t134) - q*t1*t2*t3",
        ),
        Relation::parsed(
            "red-3",
            K,
            "t123^2",
            "q^-1*t12*t23*t13 - (t1*t2*t3 + q*t1*t23 + q^-1*t2*t13 + q^-1*t3*t12)*t123 - (t1^2 + t2^2 + t3^2)
             + A^2 - (q*t2*t3*t23 + q^-1*t1*t3*t13 + q^-1*t1*t2*t12) - (q^2*t23^2 + q^-2*t13^2 + q^-2*t12^2)",
        ),
        Relation::parsed(
            "red-4",
            K,
            "t123*t234",
            "(t23 + q*t2*t3)*t0 + q^-1*t12*t23*t34 - q^-1*t3*t12*t234 - q*t2*t34*t123 + q^2*t2*t124
             + q^-2*t3*t134 - q^-2*t12*t24 - q^-2*t13*t34 + (q - q^-1)*t2*t4*t12 + q^-2*(A*t14 + t1*t4)",
        )
        .corrected(),
        Relation::parsed(
            "red-5",
            K,
            "t123*t134",
            "t13*t0 + t12*t14 + t23*t34 - t1*t124 - t3*t234 - A*t24 - t2*t4",
        )
        .corrected(),
        Relation::parsed(
            "red-6",
            K,
            "t23*t34*t124",
            "(q*t234 + q^2*t2*t34 + t3*t24 + t4*t23 + q*t2*t3*t4)*t0 + (t2*t4 + q^-1*t24)*t124 + q^3*t34*t134
             + q^-1*t23*t123 + t3*t23*t12 + q^2*t3*t14*t34 + q*t2*t12 - q^3*t3*t13 + q*t4*t14 - q^2*t1*t3^2 + q*A*t1",
        )
        .corrected(),
        Relation::parsed(
            "red-7",
            K,
            "t14*t12*t23*t34",
            "q^2*t0^2 + q^2*(q^-1*t1*t234 + q*t4*t123 + t1*t4*t23 - t2*t3*t14)*t0 + t234^2 + q^4*t123^2
             + t3*t14*t12*t234 + q^2*t2*t14*t34*t123 + q*t4*t23*t234 - q^-1*t3*t14*t134 + q^3*t1*t23*t123
             - q^3*t2*t14*t124 + q^-1*t14*t12*t24 + q^-1*t14*t13*t34 + (1 - q^2)*t2*t4*t14*t12
             - q^-2*t14^2 + q^2*t23^2 + (q - q^-1)*t1*t4*t14 + q^2*(t1^2 + t4^2 - A^2)",
        )
        .corrected(),
    ]
}

/// The four reduction relations above as they were printed, before the
/// corrections the oracle called for. Each fails verification.
pub fn misprinted_reductions() -> Vec<Relation> {
    let fixed = base_reductions();
    let find = |n: &str| fixed.iter().find(|r| r.name == n).unwrap().clone();
    let swap = |n: &str, printed: &str| {
        let r = find(n);
        Relation { rhs: parse_expression(printed, 4).expect("valid"), ..r }
    };
    vec![
        swap(
            "red-4",
            "(t23 + q*t2*t3)*t0 + q^-1*t12*t23*t34 - q^-1*t3*t12*t234 - q*t2*t34*t234 + q^2*t2*t124
             + q^-2*t3*t134 - q^-2*t12*t24 - q^-2*t13*t34 + (q - q^-1)*t2*t4*t12 + q^-2*(A*t14 + t1*t4)",
        ),
        swap("red-5", "t13*t0 + t12*t14 + t23*t34 - t1*t123 - t3*t234 - A*t24 - t2*t4"),
        swap(
            "red-6",
            "(q*t234 + q^2*t2*t34 + t3*t24 + t4*t23 + q*t2*t3*t4)*t0 + (t2*t4 + q^-1*t24)*t124 + q^3*t34*t134
             + q^-1*t23*t123 + t3*t23*t12 + q^2*t14*t34 + q*t2*t12 - q^3*t3*t13 + q*t4*t14 - q^2*t1*t3^2 + q*A*t1",
        ),
        swap(
            "red-7",
            "q^2*t0^2 + q^2*(q^-1*t1*t234 + q*t4*t123 + t1*t4*t23 - t2*t3)*t0 + t234^2 + q^4*t123^2
             + t3*t14*t12*t234 + q^2*t2*t14*t34*t123 + q*t4*t23*t234 - q^-1*t3*t14*t134 + q^3*t1*t23*t123
             - q^3*t2*t14*t124 + q^-1*t14*t12*t24 + q^-1*t14*t13*t34 + (1 - q^2)*t2*t4*t14*t12
             - q^-2*t14^2 + q^2*t23^2 + (q - q^-1)*t1*t4*t14 + q^2*(t1^2 + t4^2 - A^2)",
        ),
    ]
    .into_iter()
    .map(|r| Relation { provenance: Provenance { corrected: false, ..r.provenance }, ..r })
    .collect()
}

/// All 15 generators of the four-punctured disk in generator order.
pub fn all_generators() -> Vec<Generator> {
    let mut gs: Vec<Generator> = (1u16..16).map(|m| Generator::new(&mask_punctures(m)).unwrap()).collect();
    gs.sort();
    gs
}

fn mask_punctures(m: u16) -> Vec<u8> {
    (1..=4u8).filter(|&i| m & (1 << (i - 1)) != 0).collect()
}

pub fn centrals() -> Vec<Generator> {
    [1, 2, 3, 4, 1234].iter().map(|&d| Generator::of(d)).collect()
}

/// Whether two generator curves can be drawn disjointly, so that they
/// commute on the nose.
pub fn commute_trivially(a: Generator, b: Generator) -> bool {
    if a.is_central(4) || b.is_central(4) || a == b || a.is_subset_of(b) || b.is_subset_of(a) {
        return true;
    }
    let pair = |x: u32, y: u32| {
        let (x, y) = (Generator::of(x), Generator::of(y));
        (a == x && b == y) || (a == y && b == x)
    };
    pair(12, 34) || pair(14, 23)
}

fn word(signed: &[i64]) -> CurveWord {
    CurveWord::from_signed(signed).expect("valid letters")
}

/// `c * (word, plus central punctures)` as a multicurve-basis term.
fn word_term(c: LaurentScalar, w: &[i64], with: &[u8]) -> SkeinElement {
    let mut mc = Multicurve::single(word(w));
    for &v in with {
        mc.insert(CurveWord::standard(&[v]));
    }
    SkeinElement::term(mc, c)
}

fn sum(terms: Vec<SkeinElement>) -> SkeinElement {
    terms.iter().fold(SkeinElement::zero(), |acc, t| &acc + t)
}

/// Expansion identities, each checked against the oracle with its
/// non-generator curves written out as multicurves.
pub fn identities() -> Vec<Relation> {
    use RelationKind::Identity as K;
    let q = LaurentScalar::q;
    let qb = LaurentScalar::qbar;
    let one = LaurentScalar::one;
    let rel = |name: &str, lhs: &str, rhs: &str, words: SkeinElement| Relation::parsed(name, K, lhs, rhs).with_words(words);
    vec![
        rel("id-12.23", "t12*t23", "q^-1*t13 + t1*t3 + t2*t123", word_term(q(), &[1, 2, 3, -2], &[])),
        rel(
            "id-13.24",
            "t13*t24",
            "A*t0 + t1*t234 + t2*t134 + t3*t124 + t4*t123 + q^2*t12*t34 + q^-2*t14*t23
             + q*t3*t4*t12 + q^-1*t1*t4*t23 + q*t1*t2*t34 + q^-1*t2*t3*t14 + t1*t2*t3*t4",
            SkeinElement::zero(),
        ),
        rel("id-14.234", "t14*t234", "t4*t0 + q*t123 + t1*t23", word_term(qb(), &[1, -4, 2, 3, 4], &[])),
        rel("id-34.124", "t34*t124", "t4*t0 + q^-1*t123 + t3*t12", word_term(q(), &[1, 2, -4, 3, 4], &[])),
        rel(
            "id-24.134",
            "t24*t134",
            "t4*t0",
            sum(vec![
                word_term(qb(), &[1, 2, -4, 3, 4], &[]),
                word_term(q(), &[1, -4, 2, 3, 4], &[]),
                word_term(one(), &[1, -4, 3, 4], &[2]),
            ]),
        ),
        rel("id-14.34", "t14*t34", "q*t13 + t1*t3 + t4*t134", word_term(qb(), &[1, -4, 3, 4], &[])),
        rel("id-23.34", "t23*t34", "q^-1*t24 + t2*t4 + t3*t234", word_term(q(), &[2, 3, 4, -3], &[])),
        rel("id-13.34", "t13*t34", "q^-1*t14 + t1*t4 + t3*t134", word_term(q(), &[1, 3, 4, -3], &[])),
        rel("id-34.123", "t34*t123", "q*t124 + t4*t12 + t3*t0", word_term(qb(), &[1, 2, 3, 4, -3], &[])),
        rel("id-12.14", "t12*t14", "q*t24 + t2*t4 + t1*t124", word_term(qb(), &[1, 2, -1, 4], &[])),
        rel(
            "id-12.23.34-raw",
            "t12*t23*t34",
            "q*t1*t4 + q^-1*t12*t24 + t2*t4*t12 + t3*t12*t234",
            sum(vec![
                word_term(q() * q(), &[1, 2, 3, 4, -3, -2], &[]),
                word_term(one(), &[1, 3, 4, -3], &[]),
                word_term(q(), &[1, 2, 3, 4, -3], &[2]),
            ]),
        ),
        rel(
            "id-12.23.34",
            "t12*t23*t34",
            "t3*t12*t234 + q^2*t2*t34*t123 - q^3*t2*t124 - q^-1*t3*t134 + q^-1*t12*t24
             + q^-1*t13*t34 + (1 - q^2)*t2*t4*t12 - q^-2*t14 + (q - q^-1)*t1*t4 - q^2*t2*t3*t0",
            word_term(q() * q(), &[1, 2, 3, 4, -3, -2], &[]),
        ),
        rel("id-123.234", "t123*t234", "q^-1*t14 + t1*t4 + t23*t0", word_term(q(), &[1, 2, 3, 4, -3, -2], &[])),
        rel(
            "id-123.134",
            "t123*t134",
            "t2*t4 + t13*t0",
            sum(vec![word_term(q(), &[2, 3, 4, -3], &[]), word_term(qb(), &[1, 2, -1, 4], &[])]),
        ),
    ]
}

/// Identities whose left side has a non-generator factor, cleared by
/// substituting that factor's generator expression.
pub fn cleared_identities() -> Vec<Relation> {
    use RelationKind::Identity as K;
    vec![
        // the curve (1,2,3,-2) times t13, scaled by q
        Relation::parsed(
            "id-1232.13-cleared",
            K,
            "(t12*t23 - q^-1*t13 - t1*t3 - t2*t123)*t13",
            "q*(t123^2 + (q*t1*t23 + q^-1*t3*t12 + t1*t2*t3)*t123 + q^2*t23^2 + q^-2*t12^2
             + q*t2*t3*t23 + q^-1*t1*t2*t12 + t1^2 + t2^2 + t3^2 - A^2)",
        ),
        // t23 times the curve (1,2,-4,3,4), scaled by q
        Relation::parsed(
            "id-23.12434-cleared",
            K,
            "t23*(t34*t124 - t4*t0 - q^-1*t123 - t3*t12)",
            "q*((q*t2*t34 + q^-1*t3*t24 + t2*t3*t4 + t234)*t0 + (q^2*t34 + q*t3*t4)*t134
             + (q^-1*t2*t4 + q^-2*t24)*t124 + A*t1 + t4*t14 + t2*t12)
             + q*t3*(q*t14*t34 - q^2*t13 - q*t1*t3 - q*t4*t134)",
        ),
        // t14 times the curve (1,2,3,4,-3,-2), scaled by q
        Relation::parsed(
            "id-14.123432-cleared",
            K,
            "t14*(t123*t234 - q^-1*t14 - t1*t4 - t23*t0)",
            "q*(t0^2 + (q^-1*t1*t234 + q*t4*t123 + t1*t4*t23)*t0 + q^2*t123^2 + q^-2*t234^2
             + q^-1*t4*t23*t234 + q*t1*t23*t123 + t23^2 + t1^2 + t4^2 - A^2)",
        ),
    ]
}

pub fn centrality_relations() -> Vec<Relation> {
    let mut out = Vec::new();
    for c in centrals() {
        for g in all_generators() {
            let name = format!("central-{}-{}", c.name(4), g.name(4));
            let lhs = GenPolynomial::monomial(vec![c, g]);
            let rhs = GenPolynomial::monomial(vec![g, c]);
            out.push(Relation::new(name, RelationKind::Centrality, lhs, rhs));
        }
    }
    out
}

/// Commutations of non-central generators whose curves are disjoint or nested.
pub fn disjoint_relations() -> Vec<Relation> {
    let gens: Vec<Generator> = all_generators().into_iter().filter(|g| !g.is_central(4)).collect();
    let mut out = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            if commute_trivially(a, b) {
                let name = format!("disjoint-{}-{}", a.name(4), b.name(4));
                let lhs = GenPolynomial::monomial(vec![b, a]);
                let rhs = GenPolynomial::monomial(vec![a, b]);
                out.push(Relation::new(name, RelationKind::Disjoint, lhs, rhs));
            }
        }
    }
    out
}

/// Adds the relabelled images of `base`, dropping any that coincide with
/// an earlier member up to a scalar once disjoint commutations are applied.
fn orbit(base: &Relation, out: &mut Vec<Relation>) {
    let mut seen: Vec<GenPolynomial> = Vec::new();
    for k in 0..4 {
        let r = if k == 0 { base.clone() } else { base.permuted(k) };
        let key = trace_form(&r.difference());
        if seen.iter().any(|s| proportional(s, &key)) {
            continue;
        }
        seen.push(key);
        out.push(r);
    }
}

/// Whether `a` and `b` are proportional over the fraction field.
pub(crate) fn proportional(a: &GenPolynomial, b: &GenPolynomial) -> bool {
    let (Some((ma, ca)), Some((mb, cb))) = (a.terms().next(), b.terms().next()) else {
        return a.is_zero() && b.is_zero();
    };
    ma == mb && a.len() == b.len() && a.scale(cb) == b.scale(ca)
}

/// The full catalog: commuting relations with their relabelled images,
/// reduction relations with their families and the extra mirror,
/// centralities, disjoint commutations and the expansion identities.
pub fn build_catalog() -> RelationCatalog {
    let mut relations = Vec::new();
    for r in base_commuting() {
        orbit(&r, &mut relations);
    }
    let reds = base_reductions();
    relations.push(reds[0].clone());
    for r in &reds[1..6] {
        orbit(r, &mut relations);
    }
    relations.push(reds[6].clone());
    let mirrored = reds.iter().find(|r| r.name == "red-4").unwrap().mirrored();
    relations.push(mirrored);
    relations.extend(centrality_relations());
    relations.extend(disjoint_relations());
    relations.extend(identities());
    relations.extend(cleared_identities());
    RelationCatalog { relations }
}
