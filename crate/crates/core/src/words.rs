//! Signed ray-crossing words for simple closed curves, and multicurves.
//!
//! Walking along a curve, every passage through the ray below puncture `i`
//! records `i` (left to right) or `-i` (right to left). Cyclically reduced
//! words taken up to rotation and reversal are the isotopy invariant used
//! throughout the crate.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SkeinError;

/// One signed passage through a ray. Stored as a nonzero signed index.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i8);

impl Letter {
    pub fn new(index: u8, positive: bool) -> Self {
        assert!(index > 0 && index < 100, "puncture index out of range");
        let v = index as i8;
        Letter(if positive { v } else { -v })
    }

    /// From a signed integer such as `-2`; zero is rejected.
    pub fn from_signed(v: i64) -> Result<Self, SkeinError> {
        if v == 0 || v.abs() > 99 {
            return Err(SkeinError::InvalidLetter(v));
        }
        Ok(Letter(v as i8))
    }

    pub fn index(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn signed(self) -> i64 {
        self.0 as i64
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    fn key(self) -> (u8, bool) {
        (self.index(), self.0 < 0)
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `(1,+) < (1,-) < (2,+) < (2,-) < ...`
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn letters(signed: &[i64]) -> Vec<Letter> {
    signed.iter().map(|&v| Letter::from_signed(v).expect("nonzero letter")).collect()
}

/// Reverse with every sign flipped: the same curve walked backwards.
pub fn invert(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inverse()).collect()
}

/// Free reduction: cancels adjacent `i, -i` pairs (not around the end).
pub fn free_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Appends `tail` to a freely reduced `head`, cancelling at the junction.
pub fn concat_reduced(head: &mut Vec<Letter>, tail: &[Letter]) {
    let mut i = 0;
    while i < tail.len() && head.last() == Some(&tail[i].inverse()) {
        head.pop();
        i += 1;
    }
    head.extend_from_slice(&tail[i..]);
}

/// Removes every cancelling adjacent pair, including the pair formed by the
/// last and first letters.
pub fn reduce_cyclic(word: &[Letter]) -> Vec<Letter> {
    let w = free_reduce(word);
    let (mut lo, mut hi) = (0usize, w.len());
    while hi - lo >= 2 && w[lo] == w[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

/// Canonical word of a closed curve.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CurveWord(Vec<Letter>);

impl CurveWord {
    /// Reduces cyclically, then picks the least word among all rotations of
    /// the word and of its inverse.
    pub fn canonicalize(word: &[Letter]) -> Self {
        let w = reduce_cyclic(word);
        if w.is_empty() {
            return CurveWord(w);
        }
        let inv = invert(&w);
        let n = w.len();
        let mut best: Option<Vec<Letter>> = None;
        for cand in [&w, &inv] {
            for r in 0..n {
                let rotated: Vec<Letter> = cand[r..].iter().chain(cand[..r].iter()).copied().collect();
                if best.as_ref().is_none_or(|b| rotated < *b) {
                    best = Some(rotated);
                }
            }
        }
        CurveWord(best.unwrap())
    }

    pub fn from_signed(signed: &[i64]) -> Result<Self, SkeinError> {
        let ls = signed.iter().map(|&v| Letter::from_signed(v)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::canonicalize(&ls))
    }

    /// The word of the standard curve around `punctures` (increasing order).
    pub fn standard(punctures: &[u8]) -> Self {
        let mut ls: Vec<Letter> = punctures.iter().map(|&i| Letter::new(i, true)).collect();
        ls.sort();
        CurveWord(ls)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.0.iter().map(|l| l.signed()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Intersection counts with each ray (both signs), length `n`.
    pub fn multidegree(&self, n: usize) -> Vec<u32> {
        let mut md = vec![0u32; n];
        for l in &self.0 {
            let i = l.index() as usize;
            if i >= 1 && i <= n {
                md[i - 1] += 1;
            }
        }
        md
    }

    /// Applies a letter map (a symmetry of the ray system) and re-canonicalizes.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Self {
        let ls: Vec<Letter> = self.0.iter().map(|&l| f(l)).collect();
        Self::canonicalize(&ls)
    }
}

impl fmt::Debug for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l.0)?;
        }
        write!(f, "]")
    }
}

impl Serialize for CurveWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_signed().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<i64> = Vec::deserialize(d)?;
        CurveWord::from_signed(&v).map_err(serde::de::Error::custom)
    }
}

/// A finite multiset of essential curves, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multicurve(Vec<CurveWord>);

impl Multicurve {
    pub fn empty() -> Self {
        Multicurve(Vec::new())
    }

    pub fn new(mut words: Vec<CurveWord>) -> Result<Self, SkeinError> {
        if words.iter().any(|w| w.is_trivial()) {
            return Err(SkeinError::TrivialComponent);
        }
        words.sort();
        Ok(Multicurve(words))
    }

    pub fn single(word: CurveWord) -> Self {
        Multicurve::new(vec![word]).expect("nonempty word")
    }

    pub fn components(&self) -> &[CurveWord] {
        &self.0
    }

    /// Disjoint union.
    pub fn union(&self, other: &Multicurve) -> Multicurve {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort();
        Multicurve(v)
    }

    pub fn insert(&mut self, word: CurveWord) {
        debug_assert!(!word.is_trivial());
        let pos = self.0.binary_search(&word).unwrap_or_else(|p| p);
        self.0.insert(pos, word);
    }

    pub fn multidegree(&self, n: usize) -> Vec<u32> {
        let mut md = vec![0u32; n];
        for w in &self.0 {
            for (a, b) in md.iter_mut().zip(w.multidegree(n)) {
                *a += b;
            }
        }
        md
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|w| w.len() as u32).sum()
    }

    pub fn contains(&self, word: &CurveWord) -> bool {
        self.0.binary_search(word).is_ok()
    }

    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter + Copy) -> Self {
        let mut v: Vec<CurveWord> = self.0.iter().map(|w| w.map_letters(f)).collect();
        v.sort();
        Multicurve(v)
    }
}

impl fmt::Debug for Multicurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Multicurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for w in &self.0 {
            write!(f, "{}", w)?;
        }
        Ok(())
    }
}

impl Serialize for Multicurve {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multicurve {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<CurveWord> = Vec::deserialize(d)?;
        Multicurve::new(v).map_err(serde::de::Error::custom)
    }
}

/// Multidegree and degree of a word given as signed letters (not necessarily canonical).
pub fn multidegree(word: &CurveWord, n: usize) -> (Vec<u32>, u32) {
    let md = word.multidegree(n);
    let d = md.iter().sum();
    (md, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn w(v: &[i64]) -> CurveWord {
        CurveWord::from_signed(v).unwrap()
    }

    fn signed(v: &[Letter]) -> Vec<i64> {
        v.iter().map(|l| l.signed()).collect()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(signed(&reduce_cyclic(&letters(&[1, 2, -2, 3]))), vec![1, 3]);
        assert!(reduce_cyclic(&letters(&[1, -1])).is_empty());
        assert_eq!(signed(&reduce_cyclic(&letters(&[2, 3, -2]))), vec![3]);
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(w(&[3, 1]).to_signed(), vec![1, 3]);
        assert_eq!(w(&[-3, -1]).to_signed(), vec![1, 3]);
        // two notations of the same curve in the table and in the identities
        assert_eq!(w(&[2, 3, 4, 1, -4]).to_signed(), vec![1, -4, 2, 3, 4]);
        assert_eq!(w(&[2, 3, 4, 1, -4]), w(&[1, -4, 2, 3, 4]));
        assert_eq!(w(&[1, 2, 3, -2]).to_signed(), vec![1, 2, 3, -2]);
    }

    #[test]
    fn multidegree_examples() {
        assert_eq!(multidegree(&w(&[1, 2, 3, -2]), 4), (vec![1, 2, 1, 0], 4));
        assert_eq!(multidegree(&w(&[1, 2, 3, 4, -3, -2]), 4), (vec![1, 2, 2, 1], 6));
        let mc = Multicurve::new(vec![w(&[1, 2]), w(&[3, 4])]).unwrap();
        assert_eq!(mc.multidegree(4), vec![1, 1, 1, 1]);
        assert_eq!(mc.degree(), 4);
    }

    #[test]
    fn multicurve_canonical_order() {
        let a = Multicurve::new(vec![w(&[3, 4]), w(&[1, 2])]).unwrap();
        assert_eq!(a.components(), &[w(&[1, 2]), w(&[3, 4])]);
        let b = Multicurve::new(vec![w(&[1]), w(&[1])]).unwrap();
        assert_eq!(b.components().len(), 2);
        let c = Multicurve::new(vec![w(&[2, 3]), w(&[1, 4])]).unwrap();
        assert_eq!(c.components(), &[w(&[1, 4]), w(&[2, 3])]);
        assert!(Multicurve::new(vec![w(&[1, -1])]).is_err());
    }

    #[test]
    fn standard_words() {
        assert_eq!(CurveWord::standard(&[3, 1]).to_signed(), vec![1, 3]);
        assert_eq!(CurveWord::standard(&[1, 3]), w(&[1, 3]));
    }

    #[test]
    fn json_shapes() {
        let mc = Multicurve::new(vec![w(&[2]), w(&[1])]).unwrap();
        assert_eq!(serde_json::to_string(&mc).unwrap(), "[[1],[2]]");
        assert_eq!(serde_json::to_string(&w(&[1, 2, 3, -2])).unwrap(), "[1,2,3,-2]");
    }

    fn arb_letters(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        proptest::collection::vec(prop_oneof![1i64..=4, -4i64..=-1], 0..max_len)
            .prop_map(|v| letters(&v))
    }

    /// Cancels pairs in a random order until none remain.
    fn random_order_reduce(word: &[Letter], rng: &mut impl Rng) -> Vec<Letter> {
        let mut cur = word.to_vec();
        loop {
            let n = cur.len();
            if n < 2 {
                return cur;
            }
            let mut spots: Vec<usize> = (0..n).filter(|&i| cur[i] == cur[(i + 1) % n].inverse()).collect();
            if spots.is_empty() {
                return cur;
            }
            spots.shuffle(rng);
            let i = spots[0];
            let j = (i + 1) % n;
            if j == 0 {
                cur.pop();
                cur.remove(0);
            } else {
                cur.drain(i..=j);
            }
        }
    }

    proptest! {
        #[test]
        fn canonicalize_invariant_under_rotation_and_reversal(ls in arb_letters(16), r in 0usize..16) {
            let c = CurveWord::canonicalize(&ls);
            prop_assert_eq!(CurveWord::canonicalize(c.letters()), c.clone());
            if !ls.is_empty() {
                let r = r % ls.len();
                let rot: Vec<Letter> = ls[r..].iter().chain(ls[..r].iter()).copied().collect();
                prop_assert_eq!(CurveWord::canonicalize(&rot), c.clone());
            }
            prop_assert_eq!(CurveWord::canonicalize(&invert(&ls)), c.clone());
            prop_assert_eq!(c.multidegree(4), CurveWord::canonicalize(c.letters()).multidegree(4));
        }

        #[test]
        fn reduction_is_confluent(ls in arb_letters(30), seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = CurveWord::canonicalize(&random_order_reduce(&ls, &mut rng));
            let b = CurveWord::canonicalize(&random_order_reduce(&ls, &mut rng));
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a, CurveWord::canonicalize(&ls));
            // the reduced word is the same up to rotation, so lengths agree
            prop_assert_eq!(random_order_reduce(&ls, &mut rng).len(), reduce_cyclic(&ls).len());
        }
    }
}
