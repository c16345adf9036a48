//! Rewriting generator monomials toward distinguished monomials.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{monomial_multidegree, Evaluator, GenPolynomial, Generator, Monomial};
use crate::error::SkeinError;
use crate::scalar::LaurentScalar;

use super::catalog::{build_catalog, commute_trivially, Relation, RelationKind};
use super::derive::{derive_triple_relations, DeriveError};
use super::table::{distinguished_for, table, TableRow};

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("relation {0} does not verify and cannot be used as a rule")]
    UnverifiedRelation(String),
    #[error("rule {rule} changed the value of {monomial:?}")]
    StepFailed { rule: String, monomial: Monomial },
    #[error(transparent)]
    Derive(#[from] DeriveError),
    #[error(transparent)]
    Oracle(#[from] SkeinError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    Reduction,
    Commuting,
}

/// `lhs -> rhs`, read inside any word.
#[derive(Clone, Debug, Serialize)]
pub struct RewriteRule {
    pub name: String,
    pub kind: RuleKind,
    pub lhs: Monomial,
    pub rhs: GenPolynomial,
}

const MAX_COMPLETION_LEN: usize = 8;

/// Position in the generator order used for sorting: the central
/// generators first, then `t12 < t13 < ... < t34 < t123 < ... < t234`.
pub fn rank(g: Generator) -> u8 {
    const ORDER: [u32; 15] = [1, 2, 3, 4, 1234, 12, 13, 14, 23, 24, 34, 123, 124, 134, 234];
    ORDER.iter().position(|&d| Generator::of(d) == g).expect("generator of the four-punctured disk") as u8
}

fn weight(g: Generator) -> u32 {
    match g.size() {
        2 if g == Generator::of(13) || g == Generator::of(24) => 3,
        2 => 2,
        3 => 4,
        _ => 0,
    }
}

fn inversions(m: &[Generator]) -> usize {
    let mut n = 0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if rank(m[i]) > rank(m[j]) {
                n += 1;
            }
        }
    }
    n
}

/// The well-founded order the rules decrease: total degree, multidegree,
/// crossing weight, number of non-central factors, inversions.
pub fn order_key(m: &[Generator]) -> (u32, Vec<u32>, u32, usize, usize) {
    let md = monomial_multidegree(m, 4);
    let body = m.iter().filter(|g| !g.is_central(4)).count();
    (md.iter().sum(), md, m.iter().map(|&g| weight(g)).sum(), body, inversions(m))
}

/// Whether every term of `rhs` is strictly below `lhs` without relying on
/// the inversion count, except for a rearrangement of `lhs` itself.
pub fn strictly_decreasing(lhs: &[Generator], rhs: &GenPolynomial) -> bool {
    let k = order_key(lhs);
    let mut sorted_lhs = lhs.to_vec();
    sorted_lhs.sort();
    rhs.monomials().all(|m| {
        let km = order_key(m);
        let mut s = m.clone();
        s.sort();
        if s == sorted_lhs {
            km.4 < k.4
        } else {
            (km.0, &km.1, km.2, km.3) < (k.0, &k.1, k.2, k.3)
        }
    })
}

pub fn is_sorted(m: &[Generator]) -> bool {
    m.windows(2).all(|w| rank(w[0]) <= rank(w[1]))
}

/// Moves central generators to the front and swaps adjacent out-of-order
/// generators whose curves are disjoint.
pub fn trivial_normalize(m: &[Generator]) -> Monomial {
    let mut central: Vec<Generator> = m.iter().copied().filter(|g| g.is_central(4)).collect();
    central.sort_by_key(|&g| rank(g));
    let mut body: Vec<Generator> = m.iter().copied().filter(|g| !g.is_central(4)).collect();
    let mut i = 0;
    while i + 1 < body.len() {
        if rank(body[i]) > rank(body[i + 1]) && commute_trivially(body[i], body[i + 1]) {
            body.swap(i, i + 1);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    central.extend(body);
    central
}

/// Applies `trivial_normalize` to every term.
pub fn normalize_terms(p: &GenPolynomial) -> GenPolynomial {
    let mut out = GenPolynomial::zero();
    for (m, c) in p.terms() {
        out.add_term(trivial_normalize(m), c.clone());
    }
    out
}

fn orient(r: &Relation) -> Option<RewriteRule> {
    if !r.words.is_zero() {
        return None;
    }
    let terms: Vec<(&Monomial, _)> = r.lhs.terms().collect();
    match (r.kind, terms.as_slice()) {
        (RelationKind::Reduction, [(m, c)]) => Some(RewriteRule {
            name: r.name.clone(),
            kind: RuleKind::Reduction,
            lhs: (*m).clone(),
            rhs: r.rhs.scale(&c.unit_inverse()?),
        }),
        (RelationKind::Commuting | RelationKind::Derived, [(a, ca), (b, cb)]) => {
            let (u, cu, s, cs) = if is_sorted(a) { (*b, *cb, *a, *ca) } else { (*a, *ca, *b, *cb) };
            if is_sorted(u) || !is_sorted(s) {
                return None;
            }
            let rhs = (&r.rhs - &GenPolynomial::term(s.clone(), cs.clone())).scale(&cu.unit_inverse()?);
            Some(RewriteRule { name: r.name.clone(), kind: RuleKind::Commuting, lhs: u.clone(), rhs })
        }
        _ => None,
    }
}

/// The relations rules are oriented from, each verified by the oracle:
/// commuting and reduction relations of the catalog, the relations solved
/// for on each triple, and mirrors of the rotated `t123 t234` relation
/// that reduce the remaining sorted products of two 3-set generators.
pub fn rule_sources(ev: &Evaluator) -> Result<Vec<Relation>, RewriteError> {
    let catalog = build_catalog();
    let mut out: Vec<Relation> = catalog
        .relations
        .iter()
        .filter(|r| matches!(r.kind, RelationKind::Commuting | RelationKind::Reduction))
        .cloned()
        .collect();
    for k in 1..4 {
        let name = format!("red-4.s{}", k);
        out.push(catalog.get(&name).expect("rotated relation").mirrored());
    }
    out.extend(derive_triple_relations(ev)?.into_iter().filter(|r| !r.name.starts_with("cubic")));
    Ok(out)
}

/// Outcome of a normal form computation.
#[derive(Clone, Debug, Serialize)]
pub struct NormalForm {
    pub result: GenPolynomial,
    /// Monomials where no rule applied although they are not distinguished.
    pub irreducible: Vec<Monomial>,
    /// Rewrite steps taken, counting each monomial once.
    pub steps: usize,
    /// Steps checked against the oracle.
    pub checked: usize,
}

#[derive(Debug)]
enum Step {
    Terminal,
    Stuck,
    Rewrite(String, GenPolynomial),
}

#[derive(Debug)]
struct Resolved {
    poly: GenPolynomial,
    irreducible: BTreeSet<Monomial>,
    steps: usize,
    checked: usize,
}

/// The rewriting engine. Results are memoized per monomial.
pub struct Engine {
    ev: Evaluator,
    reductions: Vec<RewriteRule>,
    commuting: HashMap<(Generator, Generator), RewriteRule>,
    rows: Vec<TableRow>,
    memo: Mutex<HashMap<(Monomial, bool), Arc<Resolved>>>,
}

impl Engine {
    /// Builds the rule set, verifying every source relation first. Checks
    /// use an evaluator that splits off peripheral generators.
    pub fn new() -> Result<Self, RewriteError> {
        Self::with_evaluator(Evaluator::new(4).factoring_centrals())
    }

    pub fn with_evaluator(ev: Evaluator) -> Result<Self, RewriteError> {
        let sources = rule_sources(&ev)?;
        let mut reductions = Vec::new();
        let mut commuting = HashMap::new();
        for r in &sources {
            if !r.verify(&ev)?.zero {
                return Err(RewriteError::UnverifiedRelation(r.name.clone()));
            }
            match orient(r) {
                Some(rule) if rule.kind == RuleKind::Reduction => reductions.push(rule),
                Some(rule) => {
                    commuting.entry((rule.lhs[0], rule.lhs[1])).or_insert(rule);
                }
                None => {}
            }
        }
        Ok(Engine { ev, reductions, commuting, rows: table(), memo: Mutex::new(HashMap::new()) })
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.ev
    }

    /// Number of monomials whose normal form is memoized.
    pub fn memoized(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    /// Reduction rules in catalog order, then commuting rules by left side.
    pub fn rules(&self) -> Vec<&RewriteRule> {
        let mut c: Vec<&RewriteRule> = self.commuting.values().collect();
        c.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        self.reductions.iter().chain(c).collect()
    }

    /// Whether a sorted monomial is a central prefix times a distinguished
    /// monomial. Bodies missing a puncture live on a three-punctured disk
    /// and are accepted once sorted and free of reducible subwords.
    pub fn is_distinguished(&self, m: &[Generator]) -> bool {
        let body: Monomial = m.iter().copied().filter(|g| !g.is_central(4)).collect();
        if !is_sorted(&body) {
            return false;
        }
        let md = monomial_multidegree(&body, 4);
        if md.contains(&0) {
            return self.reduction_at(&body).is_none();
        }
        distinguished_for(&self.rows, &md).is_some_and(|set| set.contains(&body))
    }

    fn reduction_at(&self, body: &[Generator]) -> Option<(usize, &RewriteRule)> {
        for i in 0..body.len() {
            for r in &self.reductions {
                if body[i..].starts_with(&r.lhs) {
                    return Some((i, r));
                }
            }
        }
        None
    }

    fn step(&self, m: &[Generator]) -> Step {
        let t = trivial_normalize(m);
        if t != m {
            return Step::Rewrite("trivial".into(), GenPolynomial::monomial(t));
        }
        let split = m.iter().position(|g| !g.is_central(4)).unwrap_or(m.len());
        let (prefix, body) = m.split_at(split);
        if is_sorted(body) && self.is_distinguished(m) {
            return Step::Terminal;
        }
        let splice = |i: usize, k: usize, rhs: &GenPolynomial| {
            let mut left = prefix.to_vec();
            left.extend_from_slice(&body[..i]);
            normalize_terms(&(&(&GenPolynomial::monomial(left) * rhs) * &GenPolynomial::monomial(body[i + k..].to_vec())))
        };
        if let Some((i, r)) = self.reduction_at(body) {
            return Step::Rewrite(r.name.clone(), splice(i, r.lhs.len(), &r.rhs));
        }
        for i in 0..body.len().saturating_sub(1) {
            if let Some(r) = self.commuting.get(&(body[i], body[i + 1])) {
                return Step::Rewrite(r.name.clone(), splice(i, 2, &r.rhs));
            }
        }
        match self.complete(prefix, body) {
            Some((name, to)) => Step::Rewrite(name, to),
            None if self.splits(body) => Step::Terminal,
            None => Step::Stuck,
        }
    }

    /// Whether a sorted body is a product of two or more sorted pieces,
    /// each distinguished or splitting again.
    fn splits(&self, body: &[Generator]) -> bool {
        let k = body.len();
        if !(2..=MAX_COMPLETION_LEN).contains(&k) {
            return false;
        }
        let whole = |mask: u32| -> Monomial { (0..k).filter(|i| mask & (1 << i) != 0).map(|i| body[i]).collect() };
        let full = (1u32 << k) - 1;
        (1..full).filter(|a| a & 1 == 1).any(|a| {
            let (x, y) = (whole(a), whole(full ^ a));
            let ok = |part: &Monomial| self.is_distinguished(part) || self.splits(part);
            ok(&x) && ok(&y)
        })
    }

    /// For a sorted body with no applicable rule: finds the nearest
    /// rearrangement containing a reduction left side, reduces it, and
    /// solves for the sorted monomial using the commuting rules that
    /// carry the rearrangement back.
    fn complete(&self, prefix: &[Generator], body: &[Generator]) -> Option<(String, GenPolynomial)> {
        if body.len() > MAX_COMPLETION_LEN {
            return None;
        }
        let mut seen: BTreeSet<Monomial> = BTreeSet::from([body.to_vec()]);
        let mut frontier = vec![body.to_vec()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for i in 0..w.len().saturating_sub(1) {
                    if w[i] == w[i + 1] {
                        continue;
                    }
                    let mut v = w.clone();
                    v.swap(i, i + 1);
                    if !seen.insert(v.clone()) {
                        continue;
                    }
                    if let Some((j, r)) = self.reduction_at(&v) {
                        let mut whole = prefix.to_vec();
                        whole.extend_from_slice(&v);
                        let (c, rest) = self.carry_to_sorted(&whole)?;
                        let mut left = prefix.to_vec();
                        left.extend_from_slice(&v[..j]);
                        let reduced = &(&GenPolynomial::monomial(left) * &r.rhs) * &GenPolynomial::monomial(v[j + r.lhs.len()..].to_vec());
                        let to = (&reduced - &rest).scale(&c.unit_inverse()?);
                        return Some((format!("completion:{}", r.name), normalize_terms(&to)));
                    }
                    next.push(v);
                }
            }
            frontier = next;
        }
        None
    }

    /// Writes `m` as `c * sorted(m) + rest` using trivial swaps and
    /// commuting rules only.
    fn carry_to_sorted(&self, m: &[Generator]) -> Option<(LaurentScalar, GenPolynomial)> {
        let mut cur = trivial_normalize(m);
        let mut c = LaurentScalar::one();
        let mut rest = GenPolynomial::zero();
        loop {
            let split = cur.iter().position(|g| !g.is_central(4)).unwrap_or(cur.len());
            let body = &cur[split..];
            let Some(i) = (0..body.len().saturating_sub(1)).find(|&i| rank(body[i]) > rank(body[i + 1])) else {
                return Some((c, rest));
            };
            let r = self.commuting.get(&(body[i], body[i + 1]))?;
            let swapped = vec![body[i + 1], body[i]];
            let mut left = cur[..split + i].to_vec();
            let right = cur[split + i + 2..].to_vec();
            for (t, k) in r.rhs.terms() {
                if *t == swapped {
                    left.extend_from_slice(&swapped);
                    left.extend_from_slice(&right);
                    continue;
                }
                let mut w = cur[..split + i].to_vec();
                w.extend_from_slice(t);
                w.extend_from_slice(&right);
                rest.add_term(w, &c * k);
            }
            let k = r.rhs.coefficient(&swapped);
            if k.is_zero() {
                return None;
            }
            c = &c * &k;
            cur = trivial_normalize(&left);
        }
    }

    /// Normalizes everything but the last factor first, so that rewriting
    /// only has to insert one generator into an already reduced monomial.
    fn prefix_first(&self, m: &Monomial, checked: bool) -> Result<Option<(GenPolynomial, Arc<Resolved>)>, RewriteError> {
        let body = m.iter().filter(|g| !g.is_central(4)).count();
        if body < 3 || trivial_normalize(m) != *m {
            return Ok(None);
        }
        let (last, head) = m.split_last().expect("nonempty");
        let h = self.resolve(&head.to_vec(), checked)?;
        if h.poly.as_term().is_some_and(|(t, c)| t.as_slice() == head && c.is_one()) {
            return Ok(None);
        }
        let to = normalize_terms(&(&h.poly * &GenPolynomial::generator(*last)));
        Ok(Some((to, h)))
    }

    fn resolve(&self, m: &Monomial, checked: bool) -> Result<Arc<Resolved>, RewriteError> {
        if let Some(r) = self.memo.lock().unwrap().get(&(m.clone(), checked)) {
            return Ok(r.clone());
        }
        let (step, head) = match self.prefix_first(m, checked)? {
            Some((to, head)) => (Step::Rewrite("prefix".into(), to), Some(head)),
            None => (self.step(m), None),
        };
        let out = match step {
            Step::Terminal => Resolved {
                poly: GenPolynomial::monomial(m.clone()),
                irreducible: BTreeSet::new(),
                steps: 0,
                checked: 0,
            },
            Step::Stuck => Resolved {
                poly: GenPolynomial::monomial(m.clone()),
                irreducible: BTreeSet::from([m.clone()]),
                steps: 0,
                checked: 0,
            },
            Step::Rewrite(rule, to) => {
                let mut n_checked = 0;
                if checked {
                    if !self.ev.equals(&GenPolynomial::monomial(m.clone()), &to)?.0 {
                        return Err(RewriteError::StepFailed { rule, monomial: m.clone() });
                    }
                    n_checked = 1;
                }
                let mut acc = Resolved { poly: GenPolynomial::zero(), irreducible: BTreeSet::new(), steps: 1, checked: n_checked };
                if let Some(h) = head {
                    acc.steps += h.steps;
                    acc.checked += h.checked;
                }
                for (t, c) in to.terms() {
                    let sub = self.resolve(t, checked)?;
                    acc.poly.add_scaled(&sub.poly, c);
                    acc.irreducible.extend(sub.irreducible.iter().cloned());
                    acc.steps += sub.steps;
                    acc.checked += sub.checked;
                }
                acc
            }
        };
        let out = Arc::new(out);
        self.memo.lock().unwrap().insert((m.clone(), checked), out.clone());
        Ok(out)
    }

    /// Rewrites `m` until every monomial is a central prefix times a
    /// distinguished monomial or no rule applies. With `checked`, each
    /// rewrite step is compared against the oracle before it is taken.
    pub fn normal_form(&self, m: &[Generator], checked: bool) -> Result<NormalForm, RewriteError> {
        self.ev.evaluate_monomial(&[])?;
        for g in m {
            if g.max_puncture() > 4 {
                return Err(SkeinError::InvalidSubset { subset: g.punctures(), n: 4 }.into());
            }
        }
        let r = self.resolve(&m.to_vec(), checked)?;
        Ok(NormalForm {
            result: r.poly.clone(),
            irreducible: r.irreducible.iter().cloned().collect(),
            steps: r.steps,
            checked: r.checked,
        })
    }

    /// Normal form of a linear combination.
    pub fn normal_form_poly(&self, p: &GenPolynomial, checked: bool) -> Result<NormalForm, RewriteError> {
        let mut out = NormalForm { result: GenPolynomial::zero(), irreducible: Vec::new(), steps: 0, checked: 0 };
        let mut stuck = BTreeSet::new();
        for (m, c) in p.terms() {
            let nf = self.normal_form(m, checked)?;
            out.result.add_scaled(&nf.result, c);
            stuck.extend(nf.irreducible);
            out.steps += nf.steps;
            out.checked += nf.checked;
        }
        out.irreducible = stuck.into_iter().collect();
        Ok(out)
    }
}
