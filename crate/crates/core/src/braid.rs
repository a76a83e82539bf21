//! Braid words, pure generators and the permutation quotient.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{self, Base};
use crate::word::Letter;

/// A word in σ_1, …, σ_{n−1}. Letter generator `i` stands for σ_i.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n: u32,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn identity(n: u32) -> Self {
        assert!(n >= 1, "strand count must be positive");
        BraidWord {
            n,
            letters: Vec::new(),
        }
    }

    pub fn new(n: u32, letters: Vec<Letter>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.gen() >= n) {
            return Err(Error::Malformed(format!(
                "σ{} needs more than {n} strands",
                l.gen()
            )));
        }
        Ok(BraidWord { n, letters })
    }

    pub fn sigma(n: u32, i: u32, inverse: bool) -> Result<Self> {
        Self::new(n, vec![Letter::new(i, inverse)])
    }

    /// Parses `b<i>` and `s<j>.<i>` tokens; pure generators are expanded.
    pub fn parse(text: &str, n: u32) -> Result<Self> {
        let mut letters = Vec::new();
        for t in text::parse_tokens(text)? {
            match t.base {
                Base::Sigma(i) if i < n => text::push_power(&mut letters, Letter::pos(i), t.exp),
                Base::Pure(j, i) if j <= n => {
                    let g = PureGenerator::new(j, i)?;
                    for _ in 0..t.exp.unsigned_abs() {
                        letters.extend(
                            PureLetter {
                                gen: g,
                                inverse: t.exp < 0,
                            }
                            .expand(),
                        );
                    }
                }
                Base::Free(..) => {
                    return Err(Error::parse(
                        t.pos,
                        "expected a braid letter b<i> or s<j>.<i>",
                    ))
                }
                _ => {
                    return Err(Error::parse(
                        t.pos,
                        format!("generator out of range for n = {n}"),
                    ))
                }
            }
        }
        Ok(BraidWord { n, letters })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_n(&self, other: &BraidWord) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Literal concatenation, no cancellation.
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        self.check_n(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { n: self.n, letters })
    }

    pub fn invert(&self) -> BraidWord {
        BraidWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn push(&mut self, l: Letter) {
        assert!(l.gen() < self.n, "σ{} out of range", l.gen());
        self.letters.push(l);
    }

    pub fn perm(&self) -> Permutation {
        let mut p = Permutation::identity(self.n);
        for l in &self.letters {
            p.apply_sigma(l.gen());
        }
        p
    }

    pub fn is_pure(&self) -> bool {
        self.perm().is_identity()
    }

    /// Cancels adjacent σσ⁻¹ pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last().is_some_and(|m| m.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            n: self.n,
            letters: out,
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_sigma(&self.letters))
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}[{}]", self.n, self)
    }
}

/// The pure generator s_ji, `1 ≤ i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PureGenerator {
    pub j: u32,
    pub i: u32,
}

impl PureGenerator {
    pub fn new(j: u32, i: u32) -> Result<Self> {
        if i == 0 || i >= j {
            return Err(Error::Malformed(format!("s{j}.{i} requires 1 ≤ i < j")));
        }
        Ok(PureGenerator { j, i })
    }

    /// σ_{j−1}⁻¹ ⋯ σ_{i+1}⁻¹ σ_i² σ_{i+1} ⋯ σ_{j−1}
    pub fn expand(self) -> Vec<Letter> {
        let mut w: Vec<Letter> = (self.i + 1..self.j).rev().map(Letter::neg).collect();
        w.push(Letter::pos(self.i));
        w.push(Letter::pos(self.i));
        w.extend((self.i + 1..self.j).map(Letter::pos));
        w
    }

    /// All generators of P_n in the order s21, s31, s32, s41, …
    pub fn all(n: u32) -> impl Iterator<Item = PureGenerator> {
        (2..=n).flat_map(|j| (1..j).map(move |i| PureGenerator { j, i }))
    }
}

impl fmt::Display for PureGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}.{}", self.j, self.i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureLetter {
    pub gen: PureGenerator,
    pub inverse: bool,
}

impl PureLetter {
    pub fn new(j: u32, i: u32, inverse: bool) -> Result<Self> {
        Ok(PureLetter {
            gen: PureGenerator::new(j, i)?,
            inverse,
        })
    }

    pub fn inverse(self) -> Self {
        PureLetter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn cancels(self, other: PureLetter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    pub fn expand(self) -> Vec<Letter> {
        let w = self.gen.expand();
        if self.inverse {
            w.into_iter().rev().map(Letter::inverse).collect()
        } else {
            w
        }
    }
}

impl fmt::Display for PureLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.gen, if self.inverse { "^-1" } else { "" })
    }
}

/// A word in the pure generators s_ji of P_n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PureWord {
    n: u32,
    letters: Vec<PureLetter>,
}

impl PureWord {
    pub fn identity(n: u32) -> Self {
        PureWord {
            n,
            letters: Vec::new(),
        }
    }

    pub fn new(n: u32, letters: Vec<PureLetter>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.gen.j > n) {
            return Err(Error::Malformed(format!(
                "{} needs more than {n} strands",
                l.gen
            )));
        }
        Ok(PureWord { n, letters })
    }

    /// Parses `s<j>.<i>` tokens only.
    pub fn parse(text: &str, n: u32) -> Result<Self> {
        let mut letters = Vec::new();
        for t in text::parse_tokens(text)? {
            match t.base {
                Base::Pure(j, i) if j <= n => {
                    let l = PureLetter::new(j, i, t.exp < 0)?;
                    letters.extend(std::iter::repeat_n(l, t.exp.unsigned_abs() as usize));
                }
                Base::Pure(..) => {
                    return Err(Error::parse(
                        t.pos,
                        format!("generator out of range for n = {n}"),
                    ))
                }
                _ => return Err(Error::parse(t.pos, "expected a pure generator s<j>.<i>")),
            }
        }
        Ok(PureWord { n, letters })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn letters(&self) -> &[PureLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, l: PureLetter) {
        assert!(l.gen.j <= self.n, "{} out of range", l.gen);
        self.letters.push(l);
    }

    /// Appends with free cancellation at the junction.
    pub fn push_reduced(&mut self, l: PureLetter) {
        if self.letters.last().is_some_and(|m| m.cancels(l)) {
            self.letters.pop();
        } else {
            self.push(l);
        }
    }

    pub fn invert(&self) -> PureWord {
        PureWord {
            n: self.n,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn to_braid(&self) -> BraidWord {
        BraidWord {
            n: self.n,
            letters: self.letters.iter().flat_map(|l| l.expand()).collect(),
        }
    }
}

impl fmt::Display for PureWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = text::format_pure(self.letters.iter().map(|l| (l.gen.j, l.gen.i, l.inverse)));
        f.write_str(&s)
    }
}

impl fmt::Debug for PureWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}[{}]", self.n, self)
    }
}

/// A permutation of strand positions. `image(k)` is where the strand starting
/// at position `k` ends up.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: u32) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            let k = (v as usize).wrapping_sub(1);
            if k >= n || std::mem::replace(&mut seen[k], true) {
                return Err(Error::Malformed(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn image(&self, k: u32) -> u32 {
        self.images[(k - 1) as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, &v)| v as usize == k + 1)
    }

    /// Right-multiplies by the transposition of positions `i`, `i+1`.
    pub fn apply_sigma(&mut self, i: u32) {
        for v in &mut self.images {
            if *v == i {
                *v = i + 1;
            } else if *v == i + 1 {
                *v = i;
            }
        }
    }

    /// `p` then `q`: `compose(p, q)(k) = q(p(k))`.
    pub fn compose(&self, q: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&v| q.image(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            images[(v - 1) as usize] = k as u32 + 1;
        }
        Permutation { images }
    }

    /// Strand (by start position) sitting at position `pos`.
    pub fn strand_at(&self, pos: u32) -> u32 {
        self.images
            .iter()
            .position(|&v| v == pos)
            .expect("bijection") as u32
            + 1
    }

    pub fn inversions(&self) -> usize {
        let v = &self.images;
        (0..v.len())
            .flat_map(|a| (a + 1..v.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| v[a] > v[b])
            .count()
    }

    /// Positive braid lifting `self`, one bubble-sort swap per inversion.
    pub fn positive_lift(&self) -> BraidWord {
        // arrangement[pos] = strand, sorted by target position
        let mut arrangement: Vec<u32> = (1..=self.n()).collect();
        let mut letters = Vec::with_capacity(self.inversions());
        loop {
            let mut swapped = false;
            for p in 0..arrangement.len().saturating_sub(1) {
                if self.image(arrangement[p]) > self.image(arrangement[p + 1]) {
                    arrangement.swap(p, p + 1);
                    letters.push(Letter::pos(p as u32 + 1));
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        BraidWord {
            n: self.n(),
            letters,
        }
    }
}

/// `β = γ · π` with `π` the positive lift of `perm(β)`; `γ` is the literal `β · π⁻¹`.
pub fn coset_decompose(beta: &BraidWord) -> (BraidWord, BraidWord) {
    let pi = beta.perm().positive_lift();
    let gamma = beta.concat(&pi.invert()).expect("same strand count");
    (gamma, pi)
}
