//! Normal forms modulo the commutations of disjoint generator curves.

use crate::algebra::{GenPolynomial, Generator, Monomial};

use super::catalog::commute_trivially;

/// The lexicographically least rearrangement of `m` reachable by swapping
/// adjacent generators that commute on the nose.
pub fn trace_monomial(m: &[Generator]) -> Monomial {
    let mut rest: Vec<Generator> = m.to_vec();
    let mut out = Vec::with_capacity(m.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..rest.len() {
            if rest[..i].iter().all(|&g| commute_trivially(g, rest[i])) && best.is_none_or(|b| rest[i] < rest[b]) {
                best = Some(i);
            }
        }
        out.push(rest.remove(best.expect("first letter is always movable")));
    }
    out
}

pub fn trace_form(p: &GenPolynomial) -> GenPolynomial {
    let mut out = GenPolynomial::zero();
    for (m, c) in p.terms() {
        out.add_term(trace_monomial(m), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ds: &[u32]) -> Monomial {
        ds.iter().map(|&d| Generator::of(d)).collect()
    }

    #[test]
    fn sorts_commuting_letters() {
        assert_eq!(trace_monomial(&m(&[34, 12])), m(&[12, 34]));
        assert_eq!(trace_monomial(&m(&[1234, 23, 1])), m(&[1, 23, 1234]));
        assert_eq!(trace_monomial(&m(&[23, 12])), m(&[23, 12]));
        // t1 slides past t23 and t12, t34 slides past t12 but not t23
        assert_eq!(trace_monomial(&m(&[23, 12, 34, 1])), m(&[1, 23, 12, 34]));
    }

    #[test]
    fn idempotent() {
        let x = m(&[24, 13, 123, 4, 12, 34, 14]);
        let once = trace_monomial(&x);
        assert_eq!(trace_monomial(&once), once);
    }
}
