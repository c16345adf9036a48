//! Three-puncture relations solved for with the oracle.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::{monomial_multidegree, Evaluator, GenPolynomial, Generator, Monomial};
use crate::error::SkeinError;
use crate::scalar::LaurentScalar;
use crate::words::Multicurve;

use super::catalog::{base_reductions, Provenance, Relation, RelationKind};

#[derive(Debug, Error)]
pub enum DeriveError {
    #[error("no exact solution for the q-commutator of {a} and {b}")]
    NoSolution { a: Generator, b: Generator },
    #[error("candidate {0:?} does not evaluate to a single multicurve")]
    BadCandidate(Monomial),
    #[error(transparent)]
    Oracle(#[from] SkeinError),
}

/// The four 3-subsets of `{1,2,3,4}` in generator order.
pub fn triples() -> Vec<Generator> {
    [123, 124, 134, 234].iter().map(|&d| Generator::of(d)).collect()
}

/// The three ordered pairs `(a, b)`, `a < b`, of 2-subsets of a triple.
pub fn triple_pairs(t: Generator) -> Vec<(Generator, Generator)> {
    let p = t.punctures();
    let twos: Vec<Generator> = vec![
        Generator::new(&[p[0], p[1]]).unwrap(),
        Generator::new(&[p[0], p[2]]).unwrap(),
        Generator::new(&[p[1], p[2]]).unwrap(),
    ];
    vec![(twos[0], twos[1]), (twos[0], twos[2]), (twos[1], twos[2])]
}

/// Monomials `t_i^e_i t_j^e_j t_k^e_k * base`, with `base` one of `1`, the
/// third 2-subset or the triple, bounded by `md` componentwise.
fn candidates(t: Generator, third: Generator, md: &[u32]) -> Vec<Monomial> {
    let p = t.punctures();
    let mut out = Vec::new();
    for base in [None, Some(third), Some(t)] {
        let base_md = base.map_or(vec![0; 4], |g| monomial_multidegree(&[g], 4));
        let room: Vec<u32> = p.iter().map(|&i| md[i as usize - 1].saturating_sub(base_md[i as usize - 1])).collect();
        if p.iter().any(|&i| base_md[i as usize - 1] > md[i as usize - 1]) {
            continue;
        }
        for e0 in 0..=room[0] {
            for e1 in 0..=room[1] {
                for e2 in 0..=room[2] {
                    let mut m: Monomial = Vec::new();
                    for (k, e) in [e0, e1, e2].into_iter().enumerate() {
                        m.extend(std::iter::repeat_n(Generator::new(&[p[k]]).unwrap(), e as usize));
                    }
                    m.extend(base);
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Solves `q^e b a - q^-e a b = sum c_i m_i` over the candidate monomials,
/// trying `e = 1` and then `e = -1`.
pub fn derive_pair(ev: &Evaluator, t: Generator, a: Generator, b: Generator) -> Result<Relation, DeriveError> {
    let third = triple_pairs(t).into_iter().flat_map(|(x, y)| [x, y]).find(|&g| g != a && g != b).unwrap();
    let md = monomial_multidegree(&[a, b], 4);
    let mut by_curve: HashMap<Multicurve, Monomial> = HashMap::new();
    for m in candidates(t, third, &md) {
        let e = ev.evaluate_monomial(&m)?;
        let (mc, c) = match e.iter().next() {
            Some((mc, c)) if e.len() == 1 && c.is_one() => (mc.clone(), c),
            _ => return Err(DeriveError::BadCandidate(m)),
        };
        let _ = c;
        by_curve.insert(mc, m);
    }
    for e in [1i64, -1] {
        let lhs = GenPolynomial::term(vec![b, a], LaurentScalar::q_pow(e))
            - GenPolynomial::term(vec![a, b], LaurentScalar::q_pow(-e));
        let value = ev.evaluate(&lhs)?;
        let mut rhs = GenPolynomial::zero();
        let mut solved = true;
        for (mc, c) in value.iter() {
            match by_curve.get(mc) {
                Some(m) => rhs.add_term(m.clone(), c.clone()),
                None => {
                    solved = false;
                    break;
                }
            }
        }
        if solved {
            let name = format!("triple-{}:{},{}", t.name(4).trim_start_matches('t'), a.name(4), b.name(4));
            return Ok(Relation::new(name, RelationKind::Derived, lhs, rhs));
        }
    }
    Err(DeriveError::NoSolution { a, b })
}

/// The twelve q-commutator relations between 2-subsets sharing one
/// puncture, followed by the cubic relation for each triple.
pub fn derive_triple_relations(ev: &Evaluator) -> Result<Vec<Relation>, DeriveError> {
    let mut out = Vec::new();
    for t in triples() {
        for (a, b) in triple_pairs(t) {
            out.push(derive_pair(ev, t, a, b)?);
        }
    }
    let cubic = base_reductions().into_iter().find(|r| r.name == "red-3").expect("cubic relation");
    for (k, t) in [(0usize, 123u32), (3, 124), (2, 134), (1, 234)] {
        let r = if k == 0 { cubic.clone() } else { cubic.permuted(k) };
        out.push(Relation {
            name: format!("cubic-t{}", t),
            kind: RelationKind::Derived,
            provenance: Provenance { derived: true, ..r.provenance.clone() },
            ..r
        });
    }
    Ok(out)
}
