//! Distinguished monomials with their leading multicurves, and the checks
//! that they are independent.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{monomial_multidegree, reflect, Evaluator, Monomial};
use crate::error::SkeinError;
use crate::parse::parse_expression;
use crate::scalar::LaurentScalar;
use crate::words::{CurveWord, Multicurve};

use super::catalog::commute_trivially;

#[derive(Clone, Debug)]
pub struct TableRow {
    pub id: String,
    pub multidegree: Vec<u32>,
    pub distinguished: Vec<Monomial>,
    /// Expected leading multicurve per monomial, when one is stated.
    pub leading: Vec<Option<Multicurve>>,
    /// The leading multicurve as printed, where it had to be corrected.
    pub printed: Vec<Option<Multicurve>>,
}

fn mono(src: &str) -> Monomial {
    let p = parse_expression(src, 4).expect("table monomial");
    let (m, c) = p.as_term().expect("single term");
    assert!(c.is_one());
    m.clone()
}

fn mc(words: &[&[i64]]) -> Option<Multicurve> {
    let ws = words.iter().map(|w| CurveWord::from_signed(w).expect("letters")).collect();
    Some(Multicurve::new(ws).expect("nontrivial words"))
}

/// The 24 rows, one per multidegree up to symmetry.
pub fn table() -> Vec<TableRow> {
    let corrections: std::cell::RefCell<Vec<(&str, Option<Multicurve>)>> = Default::default();
    type Entry<'a> = (&'a str, Option<Multicurve>);
    let fixed = |m: &'static str, lead: Option<Multicurve>, printed: Option<Multicurve>| -> Entry<'static> {
        corrections.borrow_mut().push((m, printed));
        (m, lead)
    };
    let rows: Vec<([u32; 4], Vec<Entry>)> = vec![
        ([1, 1, 1, 1], vec![("t12*t34", None), ("t14*t23", None)]),
        (
            [1, 1, 1, 2],
            vec![("t14*t234", mc(&[&[2, 3, 4, 1, -4]])), ("t34*t124", mc(&[&[1, 2, -4, 3, 4]]))],
        ),
        ([1, 1, 2, 2], vec![("t12*t34^2", None), ("t14*t23*t34", None)]),
        (
            [1, 2, 1, 2],
            vec![
                ("t12*t24*t34", mc(&[&[1, 2, -4, 3, 4, -2]])),
                ("t14*t23*t24", mc(&[&[1, -4, 2, 3, -2, 4]])),
            ],
        ),
        ([1, 1, 1, 3], vec![("t14*t24*t34", None)]),
        (
            [1, 2, 2, 2],
            vec![
                ("t12*t34*t234", mc(&[&[3, 4], &[1, 2, 3, 4, -2]])),
                ("t14*t23*t234", mc(&[&[2, 3], &[1, -4, 2, 3, 4]])),
            ],
        ),
        (
            [1, 1, 2, 3],
            vec![
                ("t34^2*t124", mc(&[&[1, 2, -4, -3, 4, 3, 4]])),
                ("t14*t34*t234", mc(&[&[1, -4, -3, 4, 2, 3, 4]])),
            ],
        ),
        (
            [1, 2, 1, 3],
            vec![
                ("t24*t34*t124", mc(&[&[1, 2, 4, -2, -4, 3, 4]])),
                ("t14*t24*t234", mc(&[&[1, -4, -2, 4, 2, 3, 4]])),
            ],
        ),
        ([2, 2, 2, 2], vec![("t12^2*t34^2", None), ("t14^2*t23^2", None)]),
        (
            [2, 2, 1, 3],
            vec![
                ("t14^2*t23*t24", mc(&[&[1, 4, -1, -4, 2, 3, -2, 4]])),
                ("t12*t14*t24*t34", mc(&[&[1, 2, 4, -2, -1, -4, 3, 4]])),
            ],
        ),
        (
            [1, 1, 3, 3],
            vec![("t12*t34^3", None), fixed("t14*t23*t34^2", mc(&[&[3, 4], &[1, -4, -3, 2, 3, 4]]), mc(&[&[2, 3], &[1, -4, -3, 2, 3, 4]]))],
        ),
        (
            [1, 3, 1, 3],
            vec![
                ("t12*t34*t24^2", mc(&[&[1, 2, 4, -2], &[2, -4, 3, 4]])),
                ("t14*t23*t24^2", mc(&[&[2, 3, -2, 4], &[1, -4, 2, 4]])),
            ],
        ),
        ([1, 1, 2, 4], vec![("t14*t24*t34^2", None)]),
        ([1, 2, 1, 4], vec![("t14*t24^2*t34", None)]),
        (
            [2, 2, 2, 3],
            vec![
                ("t12*t34^2*t124", mc(&[&[1, 2], &[1, 2, -4, -3, 4, 3, 4]])),
                ("t14^2*t23*t234", mc(&[&[2, 3], &[1, 4, -1, -4, 2, 3, 4]])),
            ],
        ),
        (
            [1, 2, 2, 4],
            vec![
                ("t24*t34^2*t124", mc(&[&[2, -4, 3, 4], &[1, 2, -4, 3, 4]])),
                fixed(
                    "t14*t24*t34*t234",
                    mc(&[&[2, 4], &[1, -4, -3, 4, 2, 3, 4]]),
                    mc(&[&[2, 4], &[1, -4, 3, 4, 2, 3, 4]]),
                ),
            ],
        ),
        (
            [1, 2, 4, 2],
            vec![
                ("t23*t34^2*t123", mc(&[&[2, 3, 4, -3], &[1, 2, 3, 4, -3]])),
                ("t23^2*t34*t134", mc(&[&[2, 3, 4, -3], &[1, -3, 2, 3, 4]])),
            ],
        ),
        ([1, 2, 3, 3], vec![("t14*t23*t34*t234", None)]),
        (
            [1, 3, 2, 3],
            vec![
                fixed(
                    "t12*t24*t34*t234",
                    mc(&[&[1, 2, 3, 4, 2, -4, -3, 4, -2]]),
                    mc(&[&[1, 2, 3, 4, 2, -4, 3, 4, -2]]),
                ),
                ("t14*t23*t24*t234", mc(&[&[1, -4, 2, -3, -2, 4, 2, 3, 4]])),
            ],
        ),
        (
            [1, 1, 3, 4],
            vec![
                ("t34^3*t124", mc(&[&[1, 2, -4, -3, -4, 3, 4, 3, 4]])),
                fixed(
                    "t14*t34^2*t234",
                    mc(&[&[1, -4, -3, -4, 3, 4, 2, 3, 4]]),
                    mc(&[&[3, 4], &[3, 4], &[1, -4, 2, 3, 4]]),
                ),
            ],
        ),
        ([1, 3, 1, 4], vec![("t14*t24^2*t234", None)]),
        ([2, 2, 3, 3], vec![("t12^2*t34^3", None), ("t14^2*t23^2*t34", None)]),
        (
            [2, 3, 2, 3],
            vec![
                ("t12^2*t24*t34^2", mc(&[&[1, 2, -4, -3, 4, 3, 4, -2, -1, 2]])),
                ("t14^2*t23^2*t24", mc(&[&[1, 4, -1, -4, 2, 3, 2, -3, -2, 4]])),
            ],
        ),
        (
            [2, 2, 2, 4],
            vec![
                ("t12*t14*t24*t34^2", mc(&[&[1, 2, -4, 3, 4], &[1, 2, -4, 3, 4]])),
                ("t14^2*t23*t24*t34", mc(&[&[1, -4, 2, 3, 4], &[1, -4, 2, 3, 4]])),
            ],
        ),
    ];
    let corrections = corrections.into_inner();
    rows.into_iter()
        .enumerate()
        .map(|(i, (md, entries))| TableRow {
            id: format!("R{}", i + 1),
            multidegree: md.to_vec(),
            distinguished: entries.iter().map(|(s, _)| mono(s)).collect(),
            printed: entries
                .iter()
                .map(|(s, _)| corrections.iter().find(|(m, _)| m == s).and_then(|(_, p)| p.clone()))
                .collect(),
            leading: entries.into_iter().map(|(_, l)| l).collect(),
        })
        .collect()
}

/// The eight relabellings of the square `1 2 3 4`.
pub fn dihedral() -> Vec<Box<dyn Fn(u8) -> u8 + Send + Sync>> {
    let mut out: Vec<Box<dyn Fn(u8) -> u8 + Send + Sync>> = Vec::new();
    for k in 0..4usize {
        out.push(Box::new(move |i| crate::algebra::cyclic(i, k, 4)));
        out.push(Box::new(move |i| reflect(crate::algebra::cyclic(i, k, 4), 4)));
    }
    out
}

fn relabel_md(md: &[u32], f: &dyn Fn(u8) -> u8) -> Vec<u32> {
    let mut out = vec![0; md.len()];
    for (i, &e) in md.iter().enumerate() {
        out[f(i as u8 + 1) as usize - 1] = e;
    }
    out
}

fn sorted(mut m: Monomial) -> Monomial {
    m.sort();
    m
}

/// Distinguished monomials, as sorted multisets, for multidegree `md`:
/// the image of the matching row under the first symmetry (in the order
/// of `dihedral`) carrying the row's multidegree to `md`. `None` if no
/// row matches.
pub fn distinguished_for(rows: &[TableRow], md: &[u32]) -> Option<Vec<Monomial>> {
    for row in rows {
        for f in dihedral() {
            if relabel_md(&row.multidegree, &*f) == md {
                let mut set: Vec<Monomial> =
                    row.distinguished.iter().map(|m| sorted(m.iter().map(|g| g.relabel(&f)).collect())).collect();
                set.sort();
                return Some(set);
            }
        }
    }
    None
}

/// Where the expected leading multicurve of a monomial comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeadSource {
    /// Stated in the table.
    Stated,
    /// Stated in the table with a misprint, here corrected.
    Corrected,
    /// Not stated; the factors are pairwise disjoint, so their union.
    OwnCurves,
    /// Not stated and the factors cross: any term of full multidegree
    /// with a unit coefficient.
    FullDegree,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialCheck {
    pub monomial: String,
    pub source: LeadSource,
    pub expected: Option<Multicurve>,
    pub coefficient: LaurentScalar,
    pub unit: bool,
    pub terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub id: String,
    pub multidegree: Vec<u32>,
    pub monomials: Vec<MonomialCheck>,
    /// `(value of q^{1/2}, rank)` per specialization.
    pub ranks: Vec<(i64, usize)>,
    pub independent: bool,
    pub pass: bool,
    pub ms: f64,
}

/// Number of random specializations of `q^{1/2}` used for rank certificates.
pub const SPECIALIZATIONS: usize = 3;

/// Leading-multicurve membership and independence of a row's monomials.
pub fn check_table_row(ev: &Evaluator, row: &TableRow, seed: u64) -> Result<TableReport, SkeinError> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut expansions = Vec::new();
    for (i, m) in row.distinguished.iter().enumerate() {
        let e = ev.evaluate_monomial(m)?;
        let disjoint = m.iter().enumerate().all(|(a, &x)| m[a + 1..].iter().all(|&y| commute_trivially(x, y)));
        let (source, expected) = match (&row.leading[i], &row.printed[i]) {
            (Some(l), None) => (LeadSource::Stated, Some(l.clone())),
            (Some(l), Some(_)) => (LeadSource::Corrected, Some(l.clone())),
            (None, _) if disjoint => {
                (LeadSource::OwnCurves, Some(Multicurve::new(m.iter().map(|g| g.word()).collect()).expect("nontrivial")))
            }
            (None, _) => (LeadSource::FullDegree, None),
        };
        let (expected, coefficient) = match expected {
            Some(mc) => {
                let c = e.coefficient(&mc);
                (Some(mc), c)
            }
            None => {
                let lead = e.iter().filter(|(mc, c)| mc.multidegree(4) == row.multidegree && c.is_unit()).last();
                (lead.map(|(mc, _)| mc.clone()), lead.map(|(_, c)| c.clone()).unwrap_or_default())
            }
        };
        let unit = if source == LeadSource::OwnCurves { coefficient.is_one() } else { coefficient.is_unit() };
        checks.push(MonomialCheck {
            monomial: crate::algebra::GenPolynomial::monomial(m.clone()).to_string(),
            source,
            expected,
            coefficient,
            unit,
            terms: e.len(),
        });
        expansions.push(e);
    }

    let mut curves: Vec<&Multicurve> = expansions.iter().flat_map(|e| e.iter().map(|(mc, _)| mc)).collect();
    curves.sort();
    curves.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<i64> = Vec::new();
    while values.len() < SPECIALIZATIONS {
        let v = rng.gen_range(2..=97);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    let mut ranks = Vec::new();
    for &v in &values {
        let x = BigRational::from_integer(BigInt::from(v));
        let matrix: Vec<Vec<BigRational>> =
            curves.iter().map(|mc| expansions.iter().map(|e| e.coefficient(mc).specialize(&x)).collect()).collect();
        ranks.push((v, rational_rank(matrix)));
    }
    let independent = ranks.iter().all(|&(_, r)| r == row.distinguished.len());
    let pass = independent && checks.iter().all(|c| c.unit);
    Ok(TableReport {
        id: row.id.clone(),
        multidegree: row.multidegree.clone(),
        monomials: checks,
        ranks,
        independent,
        pass,
        ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Exact rank by Gaussian elimination over the rationals.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / &rows[rank][col];
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] * &inv;
                for c in col..ncols {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Row multidegree check: each distinguished monomial has the row's multidegree.
pub fn row_is_consistent(row: &TableRow) -> bool {
    row.distinguished.iter().all(|m| monomial_multidegree(m, 4) == row.multidegree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_consistent() {
        let rows = table();
        assert_eq!(rows.len(), 24);
        for r in &rows {
            assert!(row_is_consistent(r), "{}", r.id);
            assert!(super::super::xi_member(&r.multidegree), "{}", r.id);
        }
    }

    #[test]
    fn rank_basics() {
        let r = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(rational_rank(vec![vec![r(1), r(2)], vec![r(2), r(4)]]), 1);
        assert_eq!(rational_rank(vec![vec![r(1), r(2)], vec![r(0), r(4)], vec![r(5), r(5)]]), 2);
        assert_eq!(rational_rank(vec![]), 0);
    }

    #[test]
    fn symmetric_rows() {
        let rows = table();
        let d = distinguished_for(&rows, &[1, 1, 1, 1]).unwrap();
        assert_eq!(d, vec![mono("t12*t34"), mono("t14*t23")]);
        let d = distinguished_for(&rows, &[2, 1, 1, 1]).unwrap();
        assert_eq!(d.len(), 2);
        assert!(distinguished_for(&rows, &[3, 3, 3, 3]).is_none());
        // fixed by the reflection 1 <-> 3, which must not add a second monomial
        assert_eq!(distinguished_for(&rows, &[1, 3, 1, 4]).unwrap(), vec![mono("t14*t24^2*t234")]);
    }

    #[test]
    fn printed_leading_words_that_fail() {
        let ev = Evaluator::new(4);
        let mut misprints = 0;
        for row in table() {
            for (m, printed) in row.distinguished.iter().zip(&row.printed) {
                if let Some(p) = printed {
                    misprints += 1;
                    assert!(!ev.evaluate_monomial(m).unwrap().coefficient(p).is_unit(), "{}", row.id);
                }
            }
        }
        assert_eq!(misprints, 4);
    }

    #[test]
    fn first_rows_pass() {
        let ev = Evaluator::new(4);
        for row in &table()[..2] {
            let rep = check_table_row(&ev, row, 7).unwrap();
            assert!(rep.pass, "{:?}", rep);
        }
    }
}
