//! Exact planar layout of stacked standard curves.
//!
//! Punctures sit at `(v, 0)` for `v = 1..n`. The ray below puncture `v` is the
//! vertical segment from `(v, 0)` down to `(v, -RAY_DEPTH)`; the disk boundary
//! is reached at that depth. All coordinates are exact rationals.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::SkeinError;
use crate::words::{CurveWord, Letter};

pub type Rat = BigRational;

/// Depth at which rays meet the boundary of the disk.
pub const RAY_DEPTH: i64 = 4;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Rat::from_integer(x.into()), Rat::from_integer(y.into()))
    }

    fn sub(&self, o: &Point) -> (Rat, Rat) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

fn cross(a: &(Rat, Rat), b: &(Rat, Rat)) -> Rat {
    &a.0 * &b.1 - &a.1 * &b.0
}

/// Relative position of two closed segments.
#[derive(Clone, Debug, PartialEq)]
pub enum SegmentHit {
    Disjoint,
    /// Transverse crossing interior to both segments, with the parameters
    /// along each segment.
    Proper { point: Point, t: Rat, u: Rat },
    /// Touching at an endpoint or overlapping collinearly.
    Degenerate,
}

/// Exact intersection of segments `p1p2` and `p3p4`.
pub fn segment_hit(p1: &Point, p2: &Point, p3: &Point, p4: &Point) -> SegmentHit {
    let r = p2.sub(p1);
    let s = p4.sub(p3);
    let qp = p3.sub(p1);
    let denom = cross(&r, &s);
    if denom.is_zero() {
        if !cross(&qp, &r).is_zero() {
            return SegmentHit::Disjoint;
        }
        // collinear: compare projections on the dominant axis
        let (a0, a1, b0, b1) = if r.0.is_zero() {
            (&p1.y, &p2.y, &p3.y, &p4.y)
        } else {
            (&p1.x, &p2.x, &p3.x, &p4.x)
        };
        let (alo, ahi) = if a0 <= a1 { (a0, a1) } else { (a1, a0) };
        let (blo, bhi) = if b0 <= b1 { (b0, b1) } else { (b1, b0) };
        if ahi < blo || bhi < alo {
            return SegmentHit::Disjoint;
        }
        return SegmentHit::Degenerate;
    }
    let t = cross(&qp, &s) / &denom;
    let u = cross(&qp, &r) / &denom;
    let zero = Rat::zero();
    let one = Rat::one();
    if t < zero || t > one || u < zero || u > one {
        return SegmentHit::Disjoint;
    }
    if t == zero || t == one || u == zero || u == one {
        return SegmentHit::Degenerate;
    }
    let point = Point::new(&p1.x + &r.0 * &t, &p1.y + &r.1 * &t);
    SegmentHit::Proper { point, t, u }
}

/// A closed polyline; `vertices[i] -> vertices[i+1]` (cyclically) are its segments.
#[derive(Clone, Debug, PartialEq)]
pub struct PolylineCurve {
    pub vertices: Vec<Point>,
    /// Stacking index, 1 is the topmost factor.
    pub level: usize,
}

impl PolylineCurve {
    pub fn segment(&self, i: usize) -> (&Point, &Point) {
        let n = self.vertices.len();
        (&self.vertices[i], &self.vertices[(i + 1) % n])
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len()
    }
}

/// A ray passage found on a curve: segment index, parameter, letter.
#[derive(Clone, Debug)]
pub struct RayHit {
    pub segment: usize,
    pub t: Rat,
    pub letter: Letter,
}

/// All passages of a closed polyline through the rays of `n` punctures, in
/// walking order. Fails if the polyline touches a puncture or meets a ray
/// non-transversally.
pub fn ray_hits(vertices: &[Point], n: usize) -> Result<Vec<RayHit>, SkeinError> {
    let mut hits = Vec::new();
    let k = vertices.len();
    for i in 0..k {
        let (a, b) = (&vertices[i], &vertices[(i + 1) % k]);
        let mut here: Vec<RayHit> = Vec::new();
        for v in 1..=n {
            let top = Point::from_ints(v as i64, 0);
            let bottom = Point::from_ints(v as i64, -RAY_DEPTH);
            match segment_hit(a, b, &top, &bottom) {
                SegmentHit::Disjoint => {}
                SegmentHit::Degenerate => {
                    return Err(SkeinError::Genericity(format!(
                        "segment {i} meets ray {v} or puncture {v} non-transversally"
                    )))
                }
                SegmentHit::Proper { t, .. } => {
                    let positive = b.x > a.x;
                    here.push(RayHit { segment: i, t, letter: Letter::new(v as u8, positive) });
                }
            }
        }
        here.sort_by(|p, q| p.t.cmp(&q.t));
        hits.extend(here);
    }
    Ok(hits)
}

/// Word of an embedded loop: signed ray passages read once around, reduced
/// and canonicalized.
pub fn loop_classify(vertices: &[Point], n: usize) -> Result<CurveWord, SkeinError> {
    let hits = ray_hits(vertices, n)?;
    let ls: Vec<Letter> = hits.iter().map(|h| h.letter).collect();
    Ok(CurveWord::canonicalize(&ls))
}

/// Offsets used to draw standard curves.
///
/// Level `l` uses the unit `unit * ratio^(l-1)`: a curve's upper strand sits
/// at height `h`, its lower strand at depth `h`, and its ends extend `m` past
/// the outermost enclosed punctures, all in that unit, so every strand of
/// level `l + 1` lies strictly inside those of level `l`. Bumps over excluded
/// punctures scale the other way (see [`OffsetSchedule::at_level`]), which
/// keeps parallel copies of a curve disjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct OffsetSchedule {
    pub unit: Rat,
    pub ratio: Rat,
    pub h: Rat,
    pub b: Rat,
    pub m: Rat,
    pub w: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelOffsets {
    pub h: Rat,
    pub b: Rat,
    pub m: Rat,
    pub w: Rat,
}

impl Default for OffsetSchedule {
    fn default() -> Self {
        Self::standard(0)
    }
}

impl OffsetSchedule {
    /// A family of valid schedules indexed by `k`; distinct `k` give
    /// geometrically different layouts.
    pub fn standard(k: usize) -> Self {
        // (unit, ratio, h, b, m, w)
        const TABLE: [(i64, i64, i64, i64, i64, i64, i64, i64); 7] = [
            (1, 8, 1, 2, 3, 2, 3, 2),
            (1, 12, 1, 2, 5, 3, 5, 3),
            (1, 16, 1, 3, 7, 4, 5, 3),
            (1, 12, 2, 5, 4, 3, 4, 3),
            (1, 9, 1, 3, 3, 2, 4, 3),
            (1, 20, 1, 4, 9, 5, 7, 6),
            (1, 7, 1, 3, 3, 2, 3, 2),
        ];
        let (un, ud, rn, rd, h, b, m, w) = TABLE[k % TABLE.len()];
        let s = OffsetSchedule {
            unit: rat(un, ud),
            ratio: rat(rn, rd),
            h: Rat::from_integer(h.into()),
            b: Rat::from_integer(b.into()),
            m: Rat::from_integer(m.into()),
            w: Rat::from_integer(w.into()),
        };
        debug_assert!(s.validate().is_ok(), "built-in schedule {k} invalid");
        s
    }

    pub fn validate(&self) -> Result<(), SkeinError> {
        let zero = Rat::zero();
        let all = [&self.h, &self.b, &self.m, &self.w];
        if self.unit <= zero || self.ratio <= zero || all.iter().any(|v| **v <= zero) {
            return Err(SkeinError::InvalidSchedule("offsets must be positive".into()));
        }
        if self.b >= self.h {
            return Err(SkeinError::InvalidSchedule("bump height must be below the upper strand".into()));
        }
        let max = all.iter().copied().max().unwrap();
        let min = all.iter().copied().min().unwrap();
        if &self.ratio * max >= *min {
            return Err(SkeinError::InvalidSchedule("levels must nest strictly".into()));
        }
        let half = rat(1, 2);
        if &self.unit * max.clone().max(self.m.clone().max(self.w.clone())) >= half {
            return Err(SkeinError::InvalidSchedule("offsets must stay clear of neighbouring punctures".into()));
        }
        if &self.unit * &self.h >= Rat::from_integer(RAY_DEPTH.into()) {
            return Err(SkeinError::InvalidSchedule("curves must stay inside the disk".into()));
        }
        Ok(())
    }

    /// Offsets of the curve at `level` in a stack of `levels` curves.
    /// Strands and ends shrink geometrically with depth; bumps grow with
    /// depth instead, staying below the deepest upper strand, so that a
    /// deeper curve's bump contains every shallower one.
    pub fn at_level(&self, level: usize, levels: usize) -> LevelOffsets {
        let levels = levels.max(level);
        let power = |l: usize| &self.unit * num_traits::pow(self.ratio.clone(), l.saturating_sub(1));
        let scale = power(level);
        let frac = rat(level as i64, levels as i64);
        let grow = rat(level as i64 + levels as i64, 2 * levels as i64);
        LevelOffsets {
            h: &self.h * &scale,
            b: &self.b * power(levels) * frac,
            m: &self.m * &scale,
            w: &self.w * &self.unit * grow,
        }
    }

    /// Deterministic nudge used when a layout is not generic.
    pub fn perturbed(&self, attempt: usize) -> Self {
        let a = attempt as i64;
        let mut s = self.clone();
        s.w = &s.w * rat(97 + 2 * a, 98 + 2 * a);
        s.b = &s.b * rat(89 + 3 * a, 90 + 3 * a);
        s.ratio = &s.ratio * rat(60 + a, 61 + a);
        s
    }
}

/// The standard curve around the punctures in `subset`, drawn at `level`.
///
/// The lower strand runs below the axis and crosses the rays of the enclosed
/// punctures left to right; it bumps above every excluded puncture between
/// the outermost enclosed ones. The upper strand passes above everything.
pub fn standard_curve(
    subset: &[u8],
    n: usize,
    level: usize,
    schedule: &OffsetSchedule,
) -> Result<PolylineCurve, SkeinError> {
    stacked_curve(subset, n, level, level, schedule)
}

/// The standard curve at `level` of a stack of `levels` curves.
pub fn stacked_curve(
    subset: &[u8],
    n: usize,
    level: usize,
    levels: usize,
    schedule: &OffsetSchedule,
) -> Result<PolylineCurve, SkeinError> {
    let mut s: Vec<u8> = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() || level == 0 || s.iter().any(|&v| v == 0 || v as usize > n) || s.len() != subset.len() {
        return Err(SkeinError::InvalidSubset { subset: subset.to_vec(), n });
    }
    let off = schedule.at_level(level, levels);
    let lo = Rat::from_integer(BigInt::from(s[0]));
    let hi = Rat::from_integer(BigInt::from(*s.last().unwrap()));
    let left = &lo - &off.m;
    let right = &hi + &off.m;
    let depth = -off.h.clone();
    let mut vs = vec![Point::new(left.clone(), depth.clone())];
    for v in s[0] + 1..*s.last().unwrap() {
        if s.contains(&v) {
            continue;
        }
        let c = Rat::from_integer(BigInt::from(v));
        let (a, b) = (&c - &off.w, &c + &off.w);
        vs.push(Point::new(a.clone(), depth.clone()));
        vs.push(Point::new(a, off.b.clone()));
        vs.push(Point::new(b.clone(), off.b.clone()));
        vs.push(Point::new(b, depth.clone()));
    }
    vs.push(Point::new(right.clone(), depth));
    vs.push(Point::new(right, off.h.clone()));
    vs.push(Point::new(left, off.h.clone()));
    Ok(PolylineCurve { vertices: vs, level })
}

/// A transverse double point between two curves of a diagram.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub point: Point,
    /// (curve index, segment index, parameter) of the strand on top.
    pub over: (usize, usize, Rat),
    pub under: (usize, usize, Rat),
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub n: usize,
    pub curves: Vec<PolylineCurve>,
    pub crossings: Vec<Crossing>,
}

impl Diagram {
    /// Draws the factors of a monomial as standard curves, first factor on
    /// top, and computes all crossings. If the layout is not generic the
    /// schedule is nudged deterministically and the layout retried.
    pub fn stack(monomial: &[Vec<u8>], n: usize, schedule: &OffsetSchedule) -> Result<Diagram, SkeinError> {
        if monomial.is_empty() {
            return Err(SkeinError::EmptyMonomial);
        }
        schedule.validate()?;
        let mut last_err = None;
        for attempt in 0..8 {
            let sched = if attempt == 0 { schedule.clone() } else { schedule.perturbed(attempt) };
            if sched.validate().is_err() {
                continue;
            }
            let curves = monomial
                .iter()
                .enumerate()
                .map(|(i, s)| stacked_curve(s, n, i + 1, monomial.len(), &sched))
                .collect::<Result<Vec<_>, _>>()?;
            match Diagram::from_curves(curves, n) {
                Ok(d) => return Ok(d),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| SkeinError::Genericity("no valid perturbation".into())))
    }

    /// Builds a diagram from arbitrary simple curves, checking genericity.
    /// Curves with a smaller `level` pass over curves with a larger one.
    pub fn from_curves(curves: Vec<PolylineCurve>, n: usize) -> Result<Diagram, SkeinError> {
        for c in &curves {
            check_simple(c)?;
            ray_hits(&c.vertices, n)?;
        }
        let mut crossings = Vec::new();
        for a in 0..curves.len() {
            for b in a + 1..curves.len() {
                if curves[a].level == curves[b].level {
                    return Err(SkeinError::Genericity(format!("curves {a} and {b} share a level")));
                }
                for i in 0..curves[a].segment_count() {
                    let (p1, p2) = curves[a].segment(i);
                    for j in 0..curves[b].segment_count() {
                        let (p3, p4) = curves[b].segment(j);
                        match segment_hit(p1, p2, p3, p4) {
                            SegmentHit::Disjoint => {}
                            SegmentHit::Degenerate => {
                                return Err(SkeinError::Genericity(format!(
                                    "curves {a} and {b} touch non-transversally (segments {i}, {j})"
                                )))
                            }
                            SegmentHit::Proper { point, t, u } => {
                                let sa = (a, i, t);
                                let sb = (b, j, u);
                                let (over, under) =
                                    if curves[a].level < curves[b].level { (sa, sb) } else { (sb, sa) };
                                crossings.push(Crossing { point, over, under });
                            }
                        }
                    }
                }
            }
        }
        // no triple points, no crossing on a ray
        let mut pts: Vec<&Point> = crossings.iter().map(|c| &c.point).collect();
        pts.sort_by(|p, q| cmp_point(p, q));
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(SkeinError::Genericity("triple point".into()));
        }
        let depth = Rat::from_integer((-RAY_DEPTH).into());
        for p in &pts {
            if p.x.is_integer() && p.y <= Rat::zero() && p.y >= depth {
                let v = p.x.to_integer();
                if v >= BigInt::from(1) && v <= BigInt::from(n) {
                    return Err(SkeinError::Genericity("crossing on a ray".into()));
                }
            }
        }
        Ok(Diagram { n, curves, crossings })
    }

    /// Structured text dump for debugging.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "diagram n={} curves={} crossings={}", self.n, self.curves.len(), self.crossings.len());
        for (i, c) in self.curves.iter().enumerate() {
            let word = loop_classify(&c.vertices, self.n).map(|w| w.to_string()).unwrap_or_default();
            let _ = write!(out, "curve {i} level={} word={} vertices=", c.level, word);
            for v in &c.vertices {
                let _ = write!(out, "({},{})", v.x, v.y);
            }
            out.push('\n');
        }
        for (i, x) in self.crossings.iter().enumerate() {
            let _ = writeln!(
                out,
                "crossing {i} at ({},{}) over=curve{}/seg{} under=curve{}/seg{}",
                x.point.x, x.point.y, x.over.0, x.over.1, x.under.0, x.under.1
            );
        }
        out
    }
}

pub(crate) fn cmp_point(p: &Point, q: &Point) -> Ordering {
    p.x.cmp(&q.x).then_with(|| p.y.cmp(&q.y))
}

fn check_simple(c: &PolylineCurve) -> Result<(), SkeinError> {
    let k = c.segment_count();
    if k < 3 {
        return Err(SkeinError::Genericity("curve needs at least three vertices".into()));
    }
    for i in 0..k {
        for j in i + 1..k {
            let adjacent = j == i + 1 || (i == 0 && j == k - 1);
            let (p1, p2) = c.segment(i);
            let (p3, p4) = c.segment(j);
            let hit = segment_hit(p1, p2, p3, p4);
            if adjacent {
                // adjacent segments may only share their common vertex
                let (r, s) = (p2.sub(p1), p4.sub(p3));
                if cross(&r, &s).is_zero() && (&r.0 * &s.0 + &r.1 * &s.1).is_negative() {
                    return Err(SkeinError::Genericity("curve folds back on itself".into()));
                }
                continue;
            }
            if hit != SegmentHit::Disjoint {
                return Err(SkeinError::Genericity("curve is not simple".into()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(cx: Rat, cy: Rat, r: Rat) -> Vec<Point> {
        vec![
            Point::new(&cx - &r, &cy - &r),
            Point::new(&cx + &r, &cy - &r),
            Point::new(&cx + &r, &cy + &r),
            Point::new(&cx - &r, &cy + &r),
        ]
    }

    fn word(v: &[i64]) -> CurveWord {
        CurveWord::from_signed(v).unwrap()
    }

    #[test]
    fn loops_around_punctures() {
        let around2 = square(rat(2, 1), rat(0, 1), rat(1, 4));
        assert_eq!(loop_classify(&around2, 4).unwrap(), word(&[2]));
        let empty = square(rat(5, 2), rat(1, 1), rat(1, 4));
        assert!(loop_classify(&empty, 4).unwrap().is_trivial());
        let all = vec![
            Point::new(rat(1, 2), rat(-1, 1)),
            Point::new(rat(9, 2), rat(-1, 1)),
            Point::new(rat(9, 2), rat(1, 1)),
            Point::new(rat(1, 2), rat(1, 1)),
        ];
        assert_eq!(loop_classify(&all, 4).unwrap(), word(&[1, 2, 3, 4]));
    }

    #[test]
    fn touching_a_puncture_is_rejected() {
        let bad = square(rat(2, 1), rat(1, 4), rat(1, 4));
        assert!(loop_classify(&bad, 4).is_err());
    }

    #[test]
    fn standard_curve_words() {
        let s = OffsetSchedule::default();
        for subset in [vec![1u8, 3], vec![2], vec![1, 2, 3, 4], vec![1, 4], vec![1, 2, 4]] {
            for level in 1..6 {
                let c = standard_curve(&subset, 4, level, &s).unwrap();
                assert_eq!(loop_classify(&c.vertices, 4).unwrap(), CurveWord::standard(&subset));
            }
        }
        assert!(standard_curve(&[], 4, 1, &s).is_err());
        assert!(standard_curve(&[5], 4, 1, &s).is_err());
    }

    #[test]
    fn builtin_schedules_are_valid_and_distinct() {
        for k in 0..7 {
            OffsetSchedule::standard(k).validate().unwrap();
            OffsetSchedule::standard(k).perturbed(3).validate().unwrap();
            for j in 0..k {
                assert_ne!(OffsetSchedule::standard(j), OffsetSchedule::standard(k));
            }
        }
    }

    #[test]
    fn crossing_counts() {
        let s = OffsetSchedule::default();
        let d = Diagram::stack(&[vec![1, 2], vec![3, 4]], 4, &s).unwrap();
        assert_eq!(d.crossings.len(), 0);
        let d = Diagram::stack(&[vec![1, 2], vec![2, 3]], 4, &s).unwrap();
        assert_eq!(d.crossings.len(), 2);
        let d = Diagram::stack(&[vec![1, 3], vec![2, 4]], 4, &s).unwrap();
        assert!(d.crossings.len() >= 4);
        assert!(d.crossings.len() % 2 == 0);
        for subset in [vec![1, 4], vec![1, 3, 4], vec![2, 4]] {
            let d = Diagram::stack(&vec![subset; 5], 4, &s).unwrap();
            assert_eq!(d.crossings.len(), 0, "parallel copies are nested");
        }
        let d = Diagram::stack(&[vec![1, 4], vec![1, 3, 4]], 4, &s).unwrap();
        assert_eq!(d.crossings.len(), 2);
    }

    #[test]
    fn over_strand_is_upper_factor() {
        let d = Diagram::stack(&[vec![2, 3], vec![1, 2]], 4, &OffsetSchedule::default()).unwrap();
        for x in &d.crossings {
            assert_eq!(x.over.0, 0);
        }
    }

    #[test]
    fn segment_hits() {
        let p = |x: i64, y: i64| Point::from_ints(x, y);
        assert!(matches!(segment_hit(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)), SegmentHit::Proper { .. }));
        assert_eq!(segment_hit(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)), SegmentHit::Degenerate);
        assert_eq!(segment_hit(&p(0, 0), &p(2, 0), &p(2, 0), &p(2, 3)), SegmentHit::Degenerate);
        assert_eq!(segment_hit(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)), SegmentHit::Disjoint);
    }
}
