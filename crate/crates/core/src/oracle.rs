//! State-sum evaluation of stacked diagrams in the multicurve basis.
//!
//! Crossings are smoothed one at a time in left-to-right order. A partial
//! state is the set of arcs joining the ports of the crossings still to be
//! smoothed, each arc carrying the freely reduced word it reads; states with
//! identical arcs are merged, and every loop is classified the moment it
//! closes.

use std::collections::HashMap;

use rustc_hash::FxHashMap;

use crate::element::SkeinElement;
use crate::error::SkeinError;
use crate::geometry::{cmp_point, ray_hits, Diagram, OffsetSchedule, Rat};
use crate::scalar::LaurentScalar;
use crate::words::{concat_reduced, invert, CurveWord, Letter, Multicurve};

/// Half-exponent of the weight carried by the A-smoothing; the B-smoothing
/// gets the opposite power. Pinned by the `t12 * t23` calibration test.
pub const A_SMOOTHING_HALF_EXP: i64 = -1;

const OVER_OUT: usize = 0;
const OVER_IN: usize = 1;
const UNDER_OUT: usize = 2;
const UNDER_IN: usize = 3;

type Port = u32;

#[derive(Clone, Debug)]
struct Arc {
    other: Port,
    /// Letters read when leaving this port along the arc.
    word: Vec<Letter>,
}

/// Arcs between remaining ports, indexed by port.
#[derive(Clone, PartialEq, Eq, Hash)]
struct StateKey(Vec<(Port, Port, Vec<Letter>)>);

/// Combinatorial skeleton of a diagram: edges between crossing ports, the
/// smoothing pairings of each crossing, and loops without crossings.
struct Skeleton {
    arcs: HashMap<Port, Arc>,
    closed: Vec<CurveWord>,
    /// Per crossing, in processing order: (A pairs, B pairs).
    pairings: Vec<([(Port, Port); 2], [(Port, Port); 2])>,
}

fn skeleton(d: &Diagram) -> Result<Skeleton, SkeinError> {
    #[derive(Clone)]
    enum Ev {
        Ray(Letter),
        Cross { port_in: Port, port_out: Port },
    }
    let mut order: Vec<usize> = (0..d.crossings.len()).collect();
    order.sort_by(|&a, &b| cmp_point(&d.crossings[a].point, &d.crossings[b].point));
    let mut rank = vec![0usize; d.crossings.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let port = |crossing: usize, k: usize| (4 * rank[crossing] + k) as Port;

    let mut arcs: HashMap<Port, Arc> = HashMap::new();
    let mut closed = Vec::new();
    for (ci, curve) in d.curves.iter().enumerate() {
        let mut events: Vec<(usize, Rat, Ev)> = ray_hits(&curve.vertices, d.n)?
            .into_iter()
            .map(|h| (h.segment, h.t, Ev::Ray(h.letter)))
            .collect();
        for (xi, x) in d.crossings.iter().enumerate() {
            if x.over.0 == ci {
                events.push((x.over.1, x.over.2.clone(), Ev::Cross { port_in: port(xi, OVER_IN), port_out: port(xi, OVER_OUT) }));
            }
            if x.under.0 == ci {
                events.push((x.under.1, x.under.2.clone(), Ev::Cross { port_in: port(xi, UNDER_IN), port_out: port(xi, UNDER_OUT) }));
            }
        }
        events.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let first_cross = events.iter().position(|e| matches!(e.2, Ev::Cross { .. }));
        let Some(start) = first_cross else {
            let ls: Vec<Letter> =
                events.iter().filter_map(|e| if let Ev::Ray(l) = e.2 { Some(l) } else { None }).collect();
            closed.push(CurveWord::canonicalize(&ls));
            continue;
        };
        let k = events.len();
        let mut i = start;
        loop {
            let Ev::Cross { port_out: from, .. } = events[i].2 else { unreachable!() };
            let mut word = Vec::new();
            let mut j = (i + 1) % k;
            let to = loop {
                match &events[j].2 {
                    Ev::Ray(l) => concat_reduced(&mut word, &[*l]),
                    Ev::Cross { port_in, .. } => break *port_in,
                }
                j = (j + 1) % k;
            };
            let back = invert(&word);
            arcs.insert(from, Arc { other: to, word });
            arcs.insert(to, Arc { other: from, word: back });
            if j == start {
                break;
            }
            i = j;
        }
    }

    let mut pairings = Vec::with_capacity(order.len());
    for &xi in &order {
        let x = &d.crossings[xi];
        let dir = |curve: usize, seg: usize| {
            let (a, b) = d.curves[curve].segment(seg);
            (&b.x - &a.x, &b.y - &a.y)
        };
        let o = dir(x.over.0, x.over.1);
        let u = dir(x.under.0, x.under.1);
        let turn = &o.0 * &u.1 - &o.1 * &u.0;
        // counter-clockwise from the outgoing over end: O+, X, O-, Y
        let (cx, cy) = if turn > Rat::from_integer(0.into()) {
            (port(xi, UNDER_OUT), port(xi, UNDER_IN))
        } else {
            (port(xi, UNDER_IN), port(xi, UNDER_OUT))
        };
        let (op, om) = (port(xi, OVER_OUT), port(xi, OVER_IN));
        let a_pairs = [(cx, om), (cy, op)];
        let b_pairs = [(op, cx), (om, cy)];
        pairings.push((a_pairs, b_pairs));
    }
    Ok(Skeleton { arcs, closed, pairings })
}

/// Open arcs as `(p, q, word)` with `p < q`, sorted by `p`; `word` is read
/// leaving `p`.
fn key_of(arcs: &HashMap<Port, Arc>) -> StateKey {
    let mut v: Vec<(Port, Port, Vec<Letter>)> = arcs
        .iter()
        .filter(|(p, a)| **p < a.other)
        .map(|(p, a)| (*p, a.other, a.word.clone()))
        .collect();
    v.sort_by_key(|x| x.0);
    StateKey(v)
}

/// Removes the arc ending at `port`, returning its far end and the word read
/// from the far end towards `port`.
fn take_arc(arcs: &mut Vec<(Port, Port, Vec<Letter>)>, port: Port) -> (Port, Vec<Letter>) {
    let i = arcs.iter().position(|a| a.0 == port || a.1 == port).expect("port has an arc");
    let (p, q, w) = arcs.remove(i);
    if p == port {
        (q, invert(&w))
    } else {
        (p, w)
    }
}

fn put_arc(arcs: &mut Vec<(Port, Port, Vec<Letter>)>, from: Port, to: Port, word: Vec<Letter>) {
    let arc = if from < to { (from, to, word) } else { (to, from, invert(&word)) };
    let at = arcs.partition_point(|a| a.0 < arc.0);
    arcs.insert(at, arc);
}

/// Joins two ports of a crossing being smoothed. Returns the word of a loop
/// if the join closes one.
fn join(arcs: &mut Vec<(Port, Port, Vec<Letter>)>, a: Port, b: Port) -> Option<CurveWord> {
    let (e, mut word) = take_arc(arcs, a);
    if e == b {
        return Some(CurveWord::canonicalize(&word));
    }
    // e -> a, across the crossing, b -> f
    let (f, to_b) = take_arc(arcs, b);
    concat_reduced(&mut word, &invert(&to_b));
    put_arc(arcs, e, f, word);
    None
}

/// Partial result attached to a state: closed essential loops and their
/// accumulated coefficients.
type Partial = FxHashMap<Multicurve, LaurentScalar>;

fn absorb(into: &mut Partial, mc: Multicurve, c: LaurentScalar) {
    if c.is_zero() {
        return;
    }
    match into.entry(mc) {
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::hash_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Statistics from one resolution, for reporting and tests.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolveStats {
    pub crossings: usize,
    /// Largest number of distinct partial states alive at once.
    pub peak_states: usize,
}

/// Kauffman bracket state sum of a diagram, as a combination of multicurves.
pub fn kauffman_resolve(d: &Diagram) -> Result<SkeinElement, SkeinError> {
    resolve_with_stats(d).map(|(e, _)| e)
}

pub fn resolve_with_stats(d: &Diagram) -> Result<(SkeinElement, ResolveStats), SkeinError> {
    let sk = skeleton(d)?;
    let delta = LaurentScalar::delta();
    let weights = [
        LaurentScalar::monomial(1, A_SMOOTHING_HALF_EXP),
        LaurentScalar::monomial(1, -A_SMOOTHING_HALF_EXP),
    ];

    let mut start_mc = Multicurve::empty();
    let mut start_coeff = LaurentScalar::one();
    for w in &sk.closed {
        if w.is_trivial() {
            start_coeff = &start_coeff * &delta;
        } else {
            start_mc.insert(w.clone());
        }
    }
    let mut states: FxHashMap<StateKey, Partial> = FxHashMap::default();
    states.entry(key_of(&sk.arcs)).or_default().insert(start_mc, start_coeff);
    let mut stats = ResolveStats { crossings: sk.pairings.len(), peak_states: 1 };

    for (a_pairs, b_pairs) in &sk.pairings {
        let mut next: FxHashMap<StateKey, Partial> = FxHashMap::with_capacity_and_hasher(states.len() * 2, Default::default());
        for (key, partial) in states {
            for (pairs, weight) in [(a_pairs, &weights[0]), (b_pairs, &weights[1])] {
                let mut arcs = key.0.clone();
                let mut factor = weight.clone();
                let mut loops: Vec<CurveWord> = Vec::new();
                for &(p, q) in pairs.iter() {
                    if let Some(w) = join(&mut arcs, p, q) {
                        if w.is_trivial() {
                            factor = &factor * &delta;
                        } else {
                            loops.push(w);
                        }
                    }
                }
                let slot = next.entry(StateKey(arcs)).or_default();
                for (mc, c) in &partial {
                    let mut mc2 = mc.clone();
                    for w in &loops {
                        mc2.insert(w.clone());
                    }
                    absorb(slot, mc2, c * &factor);
                }
            }
        }
        next.retain(|_, p| !p.is_empty());
        stats.peak_states = stats.peak_states.max(next.len());
        states = next;
    }

    let mut out = SkeinElement::zero();
    for (key, partial) in states {
        debug_assert!(key.0.is_empty(), "all arcs close once every crossing is smoothed");
        for (mc, c) in partial {
            out.add_term(mc, c);
        }
    }
    Ok((out, stats))
}

/// Draws a monomial (sequence of puncture subsets, first on top) and resolves it.
pub fn resolve_monomial(
    monomial: &[Vec<u8>],
    n: usize,
    schedule: &OffsetSchedule,
) -> Result<SkeinElement, SkeinError> {
    if monomial.is_empty() {
        return Ok(SkeinElement::one());
    }
    let d = Diagram::stack(monomial, n, schedule)?;
    kauffman_resolve(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc(words: &[&[i64]]) -> Multicurve {
        Multicurve::new(words.iter().map(|w| CurveWord::from_signed(w).unwrap()).collect()).unwrap()
    }

    fn resolve(m: &[&[u8]]) -> SkeinElement {
        let v: Vec<Vec<u8>> = m.iter().map(|s| s.to_vec()).collect();
        resolve_monomial(&v, 4, &OffsetSchedule::default()).unwrap()
    }

    #[test]
    fn calibration_against_t12_t23() {
        let e = resolve(&[&[1, 2], &[2, 3]]);
        let mut expect = SkeinElement::zero();
        expect.add_term(mc(&[&[1, 2, 3, -2]]), LaurentScalar::q());
        expect.add_term(mc(&[&[1, 3]]), LaurentScalar::qbar());
        expect.add_term(mc(&[&[1], &[3]]), LaurentScalar::one());
        expect.add_term(mc(&[&[2], &[1, 2, 3]]), LaurentScalar::one());
        assert_eq!(e, expect, "\n{}", e);
    }

    #[test]
    fn disjoint_factors_do_not_interact() {
        assert_eq!(resolve(&[&[1], &[3, 4]]), SkeinElement::term(mc(&[&[1], &[3, 4]]), LaurentScalar::one()));
    }

    #[test]
    fn single_curves_resolve_to_themselves() {
        for s in [&[1u8][..], &[2, 4], &[1, 3, 4], &[1, 2, 3, 4]] {
            assert_eq!(resolve(&[s]), SkeinElement::term(mc(&[&s.iter().map(|&v| v as i64).collect::<Vec<_>>()]), LaurentScalar::one()));
        }
    }
}
