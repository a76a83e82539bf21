//! Eventually periodic boundary points, the Gromov product and the metric ρ.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, ReducedWord};

/// The infinite reduced word `head · period · period · …` in canonical form.
///
/// Canonical means: the period is a primitive cyclically reduced word,
/// `head · period` is reduced, and the head is as short as possible.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPoint {
    head: ReducedWord,
    period: ReducedWord,
}

impl BoundaryPoint {
    /// Builds the point `head · period^{+∞}` from arbitrary reduced words.
    pub fn new(head: ReducedWord, period: ReducedWord) -> Result<Self> {
        if head.rank() != period.rank() {
            return Err(Error::RankMismatch {
                left: head.rank(),
                right: period.rank(),
            });
        }
        if period.is_empty() {
            return Err(Error::EmptyWord("boundary point period"));
        }
        // X (W C W⁻¹)^∞ = X W C^∞
        let wc = period.wing_core()?;
        let head = head.concat(&wc.wing)?;
        Ok(canonicalize(head, wc.core))
    }

    pub fn head(&self) -> &ReducedWord {
        &self.head
    }

    pub fn period(&self) -> &ReducedWord {
        &self.period
    }

    pub fn rank(&self) -> u32 {
        self.head.rank()
    }

    /// Letter at 0-based index `t` of the infinite word.
    pub fn letter_at(&self, t: usize) -> Letter {
        let h = self.head.len();
        if t < h {
            self.head.letters()[t]
        } else {
            self.period.letters()[(t - h) % self.period.len()]
        }
    }

    pub fn prefix(&self, k: usize) -> ReducedWord {
        ReducedWord::from_reduced(self.rank(), (0..k).map(|t| self.letter_at(t)).collect())
    }
}

impl fmt::Debug for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}·{:?}^∞", self.head, self.period)
    }
}

fn canonicalize(head: ReducedWord, period: ReducedWord) -> BoundaryPoint {
    let rank = head.rank();
    let mut head = head.into_letters();
    let mut period = period.into_letters();
    // X x · (x⁻¹ Q)^∞ = X · (Q x⁻¹)^∞
    while let (Some(&h), Some(&p)) = (head.last(), period.first()) {
        if !h.cancels(p) {
            break;
        }
        head.pop();
        period.rotate_left(1);
    }
    let root = primitive_root_len(&period);
    period.truncate(root);
    // X x · (Q x)^∞ = X · (x Q)^∞
    while let (Some(&h), Some(&p)) = (head.last(), period.last()) {
        if h != p {
            break;
        }
        head.pop();
        period.rotate_right(1);
    }
    BoundaryPoint {
        head: ReducedWord::from_reduced(rank, head),
        period: ReducedWord::from_reduced(rank, period),
    }
}

fn primitive_root_len(w: &[Letter]) -> usize {
    let n = w.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|t| w[t] == w[t - d]))
        .unwrap_or(n)
}

/// Either a group element or a rational boundary point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(ReducedWord),
    Boundary(BoundaryPoint),
}

impl Point {
    pub fn rank(&self) -> u32 {
        match self {
            Point::Finite(w) => w.rank(),
            Point::Boundary(b) => b.rank(),
        }
    }

    fn letter_at(&self, t: usize) -> Option<Letter> {
        match self {
            Point::Finite(w) => w.letters().get(t).copied(),
            Point::Boundary(b) => Some(b.letter_at(t)),
        }
    }

    /// `k`-prefix; finite words must be at least `k` long.
    pub fn prefix(&self, k: usize) -> Result<ReducedWord> {
        match self {
            Point::Finite(w) => w.prefix(k),
            Point::Boundary(b) => Ok(b.prefix(k)),
        }
    }
}

impl From<ReducedWord> for Point {
    fn from(w: ReducedWord) -> Self {
        Point::Finite(w)
    }
}

impl From<BoundaryPoint> for Point {
    fn from(b: BoundaryPoint) -> Self {
        Point::Boundary(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GromovValue {
    Finite(u64),
    Infinite,
}

impl GromovValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            GromovValue::Finite(v) => Some(v),
            GromovValue::Infinite => None,
        }
    }
}

impl fmt::Display for GromovValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GromovValue::Finite(v) => write!(f, "{v}"),
            GromovValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Gromov product based at the identity: the common prefix length.
pub fn gromov(x: &Point, y: &Point) -> Result<GromovValue> {
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch {
            left: x.rank(),
            right: y.rank(),
        });
    }
    let bound = match (x, y) {
        (Point::Finite(a), Point::Finite(b)) => return Ok(GromovValue::Finite(a.lcp(b) as u64)),
        (Point::Finite(a), _) | (_, Point::Finite(a)) => a.len(),
        (Point::Boundary(a), Point::Boundary(b)) => {
            if a == b {
                return Ok(GromovValue::Infinite);
            }
            // Fine–Wilf: agreement on |A|+|B| letters past both heads forces equal tails
            a.head.len().max(b.head.len()) + a.period.len() + b.period.len()
        }
    };
    let mut t = 0;
    while t < bound {
        match (x.letter_at(t), y.letter_at(t)) {
            (Some(p), Some(q)) if p == q => t += 1,
            _ => break,
        }
    }
    if t == bound && matches!((x, y), (Point::Boundary(_), Point::Boundary(_))) {
        return Err(Error::Internal(
            "distinct boundary points agree past the periodicity bound".into(),
        ));
    }
    Ok(GromovValue::Finite(t as u64))
}

/// `ρ(x, y) = 1/((x|y)+1)`, zero for the same point.
pub fn rho(x: &Point, y: &Point) -> Result<Rational64> {
    if x == y {
        return Ok(Rational64::from_integer(0));
    }
    match gromov(x, y)? {
        GromovValue::Infinite => Ok(Rational64::from_integer(0)),
        GromovValue::Finite(v) => Ok(Rational64::new(1, v as i64 + 1)),
    }
}

/// `a^{+∞}` for `positive`, `a^{−∞}` otherwise.
pub fn pow_infinity(a: &ReducedWord, positive: bool) -> Result<BoundaryPoint> {
    let wc = a.wing_core()?;
    let period = if positive { wc.core } else { wc.core.invert() };
    Ok(canonicalize(wc.wing, period))
}

pub fn left_translate(a: &ReducedWord, w: &BoundaryPoint) -> Result<BoundaryPoint> {
    let head = a.concat(&w.head)?;
    Ok(canonicalize(head, w.period.clone()))
}

/// Membership in the cylinder ball of radius `1/k` around `center`.
pub fn in_ball(w: &Point, center: &BoundaryPoint, k: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::Precondition("ball index k must be positive".into()));
    }
    let g = gromov(w, &Point::Boundary(center.clone()))?;
    Ok(g >= GromovValue::Finite(k - 1))
}

/// The `k` minimizing `|c^k · w|`, ties to smaller `|k|` then smaller `k`.
pub fn coset_normalize_left(w: &ReducedWord, c: &ReducedWord) -> Result<(i64, ReducedWord)> {
    if c.is_empty() {
        return Err(Error::EmptyWord("coset_normalize_left"));
    }
    // |c^k w| ≥ |k| − |w| > |w| = |c^0 w| once |k| > 2|w|
    let window = 2 * w.len() as i64 + 1;
    let mut best: Option<(i64, ReducedWord)> = None;
    for mag in 0..=window {
        for k in if mag == 0 { vec![0] } else { vec![-mag, mag] } {
            let rep = c.power(k).concat(w)?;
            if best.as_ref().is_none_or(|(_, b)| rep.len() < b.len()) {
                best = Some((k, rep));
            }
        }
    }
    Ok(best.expect("window is nonempty"))
}
