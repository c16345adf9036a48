use proptest::prelude::*;

use skein::algebra::{monomial_multidegree, GenPolynomial, Generator, Monomial};
use skein::presentation::catalog::all_generators;
use skein::presentation::rewrite::{is_sorted, rank};
use skein::presentation::table::{distinguished_for, table};
use skein::presentation::Engine;
use skein::{parse_expression, CurveWord, LaurentScalar, Multicurve};

fn mono(src: &str) -> Monomial {
    parse_expression(src, 4).unwrap().monomials().next().unwrap().clone()
}

fn mc(words: &[&[i64]]) -> Multicurve {
    Multicurve::new(words.iter().map(|w| CurveWord::from_signed(w).unwrap()).collect()).unwrap()
}

fn engine() -> &'static Engine {
    static E: std::sync::OnceLock<Engine> = std::sync::OnceLock::new();
    E.get_or_init(|| Engine::new().unwrap())
}

#[test]
fn sorted_table_monomials_are_fixed_points() {
    let e = engine();
    for row in table() {
        for m in &row.distinguished {
            let mut sorted = m.clone();
            sorted.sort_by_key(|&g| rank(g));
            let nf = e.normal_form(&sorted, false).unwrap();
            assert_eq!(nf.result, GenPolynomial::monomial(sorted.clone()), "{}", row.id);
            assert_eq!(nf.steps, 0);
            let nf = e.normal_form(m, false).unwrap();
            assert!(nf.irreducible.is_empty(), "{}", row.id);
            assert!(e.evaluator().equals(&GenPolynomial::monomial(m.clone()), &nf.result).unwrap().0, "{}", row.id);
        }
    }
}

/// At multidegree (1,2,3,3) the only table monomial is t14 t23 t34 t234,
/// yet t12 t34^2 t234 has a top multicurve that monomial cannot produce.
/// Products of lower table monomials are therefore needed as well.
#[test]
fn table_alone_does_not_span_top_degree() {
    let e = engine();
    let ev = e.evaluator();
    let product = mono("t12*t34^2*t234");
    let md = monomial_multidegree(&product, 4);
    assert_eq!(md, vec![1, 2, 3, 3]);
    assert_eq!(distinguished_for(&table(), &md).unwrap(), vec![mono("t14*t23*t34*t234")]);

    let top = mc(&[&[1, 2, 3, 4, -2], &[3, 4], &[3, 4]]);
    assert_eq!(ev.evaluate_monomial(&product).unwrap().coefficient(&top), LaurentScalar::q());
    assert!(ev.evaluate_monomial(&mono("t14*t23*t34*t234")).unwrap().coefficient(&top).is_zero());

    let nf = e.normal_form(&product, false).unwrap();
    assert!(nf.irreducible.is_empty());
    assert_eq!(nf.result, GenPolynomial::monomial(product));
}

#[test]
fn normal_forms_are_sorted_and_terminal() {
    let e = engine();
    for src in ["t23*t12", "t24*t13", "t34*t12*t23", "t234*t123*t1", "t134*t24*t12"] {
        let m = mono(src);
        let nf = e.normal_form(&m, false).unwrap();
        assert!(nf.irreducible.is_empty(), "{}", src);
        for t in nf.result.monomials() {
            let body: Monomial = t.iter().copied().filter(|g| !g.is_central(4)).collect();
            assert!(is_sorted(&body), "{} -> {:?}", src, t);
        }
        assert!(e.evaluator().equals(&GenPolynomial::monomial(m), &nf.result).unwrap().0, "{}", src);
    }
}

#[test]
fn checked_mode_counts_every_step() {
    let e = engine();
    let nf = e.normal_form(&mono("t24*t13*t12"), true).unwrap();
    assert!(nf.steps > 0);
    assert_eq!(nf.steps, nf.checked);
}

#[test]
fn linear_combinations_normalize_termwise() {
    let e = engine();
    let p = parse_expression("q*t23*t12 - t24*t13 + 2", 4).unwrap();
    let whole = e.normal_form_poly(&p, false).unwrap().result;
    let mut parts = GenPolynomial::zero();
    for (m, c) in p.terms() {
        parts.add_scaled(&e.normal_form(m, false).unwrap().result, c);
    }
    assert_eq!(whole, parts);
}

fn arb_monomial(max: usize) -> impl Strategy<Value = Vec<Generator>> {
    let gs = all_generators();
    prop::collection::vec((0..gs.len()).prop_map(move |i| gs[i]), 1..=max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, .. ProptestConfig::default() })]

    #[test]
    fn normal_form_preserves_value_and_terminates(m in arb_monomial(4)) {
        let e = engine();
        let nf = e.normal_form(&m, false).unwrap();
        let bound = monomial_multidegree(&m, 4);
        for t in nf.result.monomials() {
            let md = monomial_multidegree(t, 4);
            prop_assert!(md.iter().zip(&bound).all(|(a, b)| a <= b));
        }
        prop_assert!(nf.irreducible.is_empty(), "{:?}", nf.irreducible);
        prop_assert!(e.evaluator().equals(&GenPolynomial::monomial(m), &nf.result).unwrap().0);
    }
}
