use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skein::algebra::{monomial_multidegree, Evaluator, GenPolynomial, Monomial};
use skein::geometry::OffsetSchedule;
use skein::presentation::catalog::{all_generators, base_commuting, cleared_identities, identities};
use skein::presentation::derive::{derive_triple_relations, triple_pairs, triples};
use skein::presentation::table::{check_table_row, distinguished_for, table};
use skein::presentation::{build_catalog, Engine, RelationKind};
use skein::{parse_expression, LaurentScalar, Multicurve, SkeinElement};

const CALIBRATION_LIMIT: Duration = Duration::from_secs(1);
const IDENTITY_LIMIT: Duration = Duration::from_secs(5);
const RELATION_LIMIT: Duration = Duration::from_secs(60);
const SUITE_LIMIT: Duration = Duration::from_secs(600);
const ROBUSTNESS_SAMPLES: usize = 20;
const ROBUSTNESS_SCHEDULES: usize = 5;
const ENGINE_SAMPLES: usize = 200;
const MIRROR_PAIRS: usize = 50;
const MAX_DEGREE: usize = 6;
const SEED: u64 = 0x5eed_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_monomial(rng: &mut ChaCha8Rng, max: usize) -> Monomial {
    let gs = all_generators();
    let d = rng.gen_range(1..=max);
    (0..d).map(|_| gs[rng.gen_range(0..gs.len())]).collect()
}

fn mc(words: &[&[i64]]) -> Multicurve {
    Multicurve::new(words.iter().map(|w| skein::CurveWord::from_signed(w).unwrap()).collect()).unwrap()
}

fn calibration() -> Outcome {
    let ev = Evaluator::new(4);
    let start = Instant::now();
    let e = ev.evaluate(&parse_expression("t12*t23", 4).unwrap()).unwrap();
    let took = start.elapsed();
    let mut expected = SkeinElement::zero();
    expected.add_term(mc(&[&[1, 2, 3, -2]]), LaurentScalar::q());
    expected.add_term(mc(&[&[1, 3]]), LaurentScalar::qbar());
    expected.add_term(mc(&[&[1], &[3]]), LaurentScalar::one());
    expected.add_term(mc(&[&[2], &[1, 2, 3]]), LaurentScalar::one());
    outcome(e == expected && took < CALIBRATION_LIMIT, format!("{} terms, {:?}", e.len(), took))
}

fn identity_suite() -> Outcome {
    let ev = Evaluator::new(4);
    let required = ["id-13.24", "id-14.234", "id-34.124", "id-24.134", "id-12.23.34-raw", "id-12.23.34", "id-14.34"];
    let ids = identities();
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for r in &ids {
        let rep = r.verify(&ev).unwrap();
        let took = Duration::from_secs_f64(rep.ms / 1e3);
        slowest = slowest.max(took);
        if !rep.zero || took >= IDENTITY_LIMIT {
            bad.push(r.name.clone());
        }
    }
    let missing: Vec<&str> = required.iter().copied().filter(|n| !ids.iter().any(|r| r.name == *n)).collect();
    outcome(
        bad.is_empty() && missing.is_empty(),
        format!("{} identities, failing {:?}, missing {:?}, slowest {:?}", ids.len(), bad, missing, slowest),
    )
}

fn cleared_suite() -> Outcome {
    let ev = Evaluator::new(4);
    let rels = cleared_identities();
    let bad: Vec<String> = rels.iter().filter(|r| !r.verify(&ev).unwrap().zero).map(|r| r.name.clone()).collect();
    outcome(rels.len() == 3 && bad.is_empty(), format!("{} cleared identities, failing {:?}", rels.len(), bad))
}

fn presentation_suite() -> Outcome {
    let ev = Evaluator::new(4);
    let cat = build_catalog();
    let start = Instant::now();
    let mut counts = [0usize; 3];
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for r in &cat.relations {
        let slot = match r.kind {
            RelationKind::Commuting => 0,
            RelationKind::Reduction => 1,
            RelationKind::Centrality => 2,
            _ => continue,
        };
        counts[slot] += 1;
        let rep = r.verify(&ev).unwrap();
        let took = Duration::from_secs_f64(rep.ms / 1e3);
        slowest = slowest.max(took);
        if !rep.zero || took >= RELATION_LIMIT {
            bad.push(r.name.clone());
        }
    }
    let total = start.elapsed();
    outcome(
        bad.is_empty() && counts == [17, 23, 75] && total < SUITE_LIMIT,
        format!(
            "commuting {} reduction {} centrality {}, failing {:?}, total {:?}, slowest {:?}",
            counts[0], counts[1], counts[2], bad, total, slowest
        ),
    )
}

fn negative_control() -> Outcome {
    let ev = Evaluator::new(4);
    let r = &base_commuting()[0];
    let mut mutants = 0;
    let mut caught = 0;
    for side in 0..2 {
        let poly = if side == 0 { &r.lhs } else { &r.rhs };
        for (m, c) in poly.terms() {
            for bump in [c * &LaurentScalar::q(), c + &LaurentScalar::one()] {
                let mut mutated = poly.clone();
                mutated.add_term(m.clone(), &bump - c);
                let (l, rr) = if side == 0 { (&mutated, &r.rhs) } else { (&r.lhs, &mutated) };
                mutants += 1;
                if !ev.equals(l, rr).unwrap().0 {
                    caught += 1;
                }
            }
        }
    }
    let printed = parse_expression("(q^3 - q^-2)*t13 + (q - q^-1)*(t1*t3 + t2*t123)", 4).unwrap();
    let example = !ev.equals(&r.lhs, &printed).unwrap().0;
    outcome(caught == mutants && example, format!("{}/{} single-coefficient mutants rejected, q^2 -> q^3 rejected: {}", caught, mutants, example))
}

fn table_suite() -> Outcome {
    let ev = Evaluator::new(4);
    let rows = table();
    let start = Instant::now();
    let mut failing = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rep = check_table_row(&ev, row, SEED + i as u64).unwrap();
        if !rep.pass {
            failing.push(rep.id);
        }
    }
    let total = start.elapsed();
    outcome(
        failing.is_empty() && total < SUITE_LIMIT,
        format!("{} rows, failing {:?}, total {:?}", rows.len(), failing, total),
    )
}

fn robustness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let evs: Vec<Evaluator> = (0..ROBUSTNESS_SCHEDULES).map(|k| Evaluator::with_schedule(4, OffsetSchedule::standard(k))).collect();
    let mut bad = Vec::new();
    for _ in 0..ROBUSTNESS_SAMPLES {
        let m = random_monomial(&mut rng, MAX_DEGREE);
        let base = evs[0].evaluate_monomial(&m).unwrap();
        if evs[1..].iter().any(|ev| ev.evaluate_monomial(&m).unwrap() != base) {
            bad.push(format!("{:?}", m));
        }
    }
    outcome(bad.is_empty(), format!("{} monomials x {} schedules, disagreeing {:?}", ROBUSTNESS_SAMPLES, ROBUSTNESS_SCHEDULES, bad))
}

fn engine_vs_oracle() -> Outcome {
    let engine = Engine::new().unwrap();
    let rows = table();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    let (mut steps, mut failures, mut irreducible, mut in_rows, mut in_rows_irreducible) = (0, Vec::new(), 0, 0, 0);
    for _ in 0..ENGINE_SAMPLES {
        let m = random_monomial(&mut rng, MAX_DEGREE);
        let in_row = distinguished_for(&rows, &monomial_multidegree(&m, 4)).is_some();
        in_rows += in_row as usize;
        match engine.normal_form(&m, true) {
            Ok(nf) => {
                steps += nf.checked;
                let agrees = engine.evaluator().equals(&GenPolynomial::monomial(m.clone()), &nf.result).unwrap().0;
                if !agrees {
                    failures.push(format!("{:?}", m));
                }
                irreducible += nf.irreducible.len();
                if in_row && !nf.irreducible.is_empty() {
                    in_rows_irreducible += 1;
                }
            }
            Err(e) => failures.push(format!("{:?}: {}", m, e)),
        }
    }
    outcome(
        failures.is_empty() && in_rows_irreducible == 0,
        format!(
            "{} monomials, {} checked steps, failures {:?}, irreducible findings {} ({} of {} monomials with a table multidegree), {:?}",
            ENGINE_SAMPLES,
            steps,
            failures,
            irreducible,
            in_rows_irreducible,
            in_rows,
            start.elapsed()
        ),
    )
}

fn mirror_suite() -> Outcome {
    let ev = Evaluator::new(4);
    let cat = build_catalog();
    let bad: Vec<String> = cat.relations.iter().filter(|r| !r.mirrored().verify(&ev).unwrap().zero).map(|r| r.name.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pair_bad = 0;
    for _ in 0..MIRROR_PAIRS {
        let x = GenPolynomial::monomial(random_monomial(&mut rng, 3));
        let y = GenPolynomial::monomial(random_monomial(&mut rng, 3));
        let xy = &x * &y;
        let lhs = ev.evaluate(&xy.mirror()).unwrap();
        let rhs = ev.evaluate(&(&y.mirror() * &x.mirror())).unwrap();
        if lhs != rhs || lhs != ev.evaluate(&xy).unwrap().bar() {
            pair_bad += 1;
        }
    }
    outcome(
        bad.is_empty() && pair_bad == 0,
        format!("{} mirrored relations, failing {:?}; {} pairs, failing {}", cat.len(), bad, MIRROR_PAIRS, pair_bad),
    )
}

fn derived_suite() -> Outcome {
    let ev = Evaluator::new(4);
    let rels = match derive_triple_relations(&ev) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let pairs: usize = triples().into_iter().map(|t| triple_pairs(t).len()).sum();
    let solved = rels.iter().filter(|r| !r.name.starts_with("cubic")).count();
    let bad: Vec<String> = rels.iter().filter(|r| !r.verify(&ev).unwrap().zero).map(|r| r.name.clone()).collect();
    let printed = &base_commuting()[0];
    let verbatim = rels.iter().any(|r| r.name == "triple-123:t12,t23" && r.lhs == printed.lhs && r.rhs == printed.rhs);
    outcome(
        pairs == 12 && solved == 12 && bad.is_empty() && verbatim,
        format!("{} pair relations solved, {} cubics, failing {:?}, reproduces the t12 t23 commutator: {}", solved, rels.len() - solved, bad, verbatim),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("calibration", calibration),
        ("direct identities", identity_suite),
        ("cleared identities", cleared_suite),
        ("presentation", presentation_suite),
        ("negative control", negative_control),
        ("table", table_suite),
        ("oracle robustness", robustness),
        ("engine vs oracle", engine_vs_oracle),
        ("mirror", mirror_suite),
        ("derived relations", derived_suite),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let o = run();
        println!("criterion {:>2} {:<20} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.pass as usize;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", failed);
        ExitCode::FAILURE
    }
}
