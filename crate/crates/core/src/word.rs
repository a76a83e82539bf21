//! Free-group words.
//!
//! A [`ReducedWord`] is the normal form of an element of a free group of a
//! fixed rank: a letter sequence with no adjacent mutually inverse pair.
//! The same letter type is reused for the `x`, `y` and `u` alphabets, and
//! for Artin generators inside braid words.

use std::fmt;

use crate::error::{Error, Result};

/// A generator (1-based) or its inverse, packed as a signed integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        assert!(
            gen >= 1 && gen <= i32::MAX as u32,
            "generator index out of range: {gen}"
        );
        let g = gen as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn pos(gen: u32) -> Self {
        Self::new(gen, false)
    }

    pub fn neg(gen: u32) -> Self {
        Self::new(gen, true)
    }

    /// Builds a letter from a nonzero signed index (`-3` is the inverse of generator 3).
    pub fn from_signed(value: i32) -> Option<Self> {
        (value != 0).then_some(Letter(value))
    }

    pub fn gen(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.0 == -other.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "u{}^-1", self.gen())
        } else {
            write!(f, "u{}", self.gen())
        }
    }
}

/// Reduced word in a free group of rank `rank`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    letters: Vec<Letter>,
    rank: u32,
}

impl ReducedWord {
    pub fn identity(rank: u32) -> Self {
        ReducedWord {
            letters: Vec::new(),
            rank,
        }
    }

    pub fn generator(rank: u32, gen: u32) -> Result<Self> {
        Self::reduce(rank, [Letter::pos(gen)])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(rank: u32, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut w = ReducedWord::identity(rank);
        for l in letters {
            if l.gen() > rank {
                return Err(Error::Malformed(format!(
                    "generator {} exceeds rank {rank}",
                    l.gen()
                )));
            }
            w.push(l);
        }
        Ok(w)
    }

    /// Wraps letters that are already known to be reduced and within rank.
    pub(crate) fn from_reduced(rank: u32, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| !p[0].cancels(p[1])));
        debug_assert!(letters.iter().all(|l| l.gen() <= rank));
        ReducedWord { letters, rank }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Right-multiplies by one letter, cancelling at the junction.
    pub fn push(&mut self, l: Letter) {
        debug_assert!(l.gen() <= self.rank);
        match self.letters.last() {
            Some(&last) if last.cancels(l) => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
    }

    /// Right-multiplies by a reduced letter slice; only the junction is rescanned.
    pub fn push_reduced(&mut self, tail: &[Letter]) {
        let mut skip = 0;
        while skip < tail.len() {
            match self.letters.last() {
                Some(&last) if last.cancels(tail[skip]) => {
                    self.letters.pop();
                    skip += 1;
                }
                _ => break,
            }
        }
        self.letters.extend_from_slice(&tail[skip..]);
    }

    /// Right-multiplies by the inverse of a reduced letter slice.
    pub fn push_inverse_of(&mut self, tail: &[Letter]) {
        for &l in tail.iter().rev() {
            self.push(l.inverse());
        }
    }

    fn check_rank(&self, other: &ReducedWord) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn concat(&self, other: &ReducedWord) -> Result<ReducedWord> {
        self.check_rank(other)?;
        let mut out = self.clone();
        out.push_reduced(&other.letters);
        Ok(out)
    }

    pub fn invert(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            rank: self.rank,
        }
    }

    /// `self^q`; `power(0)` is the identity.
    pub fn power(&self, q: i64) -> ReducedWord {
        let base = if q < 0 { self.invert() } else { self.clone() };
        let mut out = ReducedWord::identity(self.rank);
        for _ in 0..q.unsigned_abs() {
            out.push_reduced(&base.letters);
        }
        out
    }

    /// `self · mid · self⁻¹`.
    pub fn conjugate(&self, mid: &ReducedWord) -> Result<ReducedWord> {
        self.check_rank(mid)?;
        let mut out = self.clone();
        out.push_reduced(&mid.letters);
        out.push_inverse_of(&self.letters);
        Ok(out)
    }

    pub fn commutes_with(&self, other: &ReducedWord) -> Result<bool> {
        Ok(self.concat(other)? == other.concat(self)?)
    }

    /// `V·V` is reduced (the empty word counts as cyclically reduced).
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => !a.cancels(b),
            _ => true,
        }
    }

    pub fn wing_core(&self) -> Result<WingCore> {
        if self.is_empty() {
            return Err(Error::EmptyWord("wing_core"));
        }
        let (mut i, mut j) = (0usize, self.len() - 1);
        while i < j && self.letters[i].cancels(self.letters[j]) {
            i += 1;
            j -= 1;
        }
        Ok(WingCore {
            wing: ReducedWord::from_reduced(self.rank, self.letters[..i].to_vec()),
            core: ReducedWord::from_reduced(self.rank, self.letters[i..=j].to_vec()),
        })
    }

    pub fn wing_len(&self) -> usize {
        self.wing_core().map(|wc| wc.wing.len()).unwrap_or(0)
    }

    pub fn prefix(&self, k: usize) -> Result<ReducedWord> {
        if k > self.len() {
            return Err(Error::Precondition(format!(
                "prefix length {k} exceeds word length {}",
                self.len()
            )));
        }
        Ok(ReducedWord::from_reduced(
            self.rank,
            self.letters[..k].to_vec(),
        ))
    }

    /// Length of the longest common prefix.
    pub fn lcp(&self, other: &ReducedWord) -> usize {
        self.letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Raises the rank bound without touching the letters.
    pub fn with_rank(mut self, rank: u32) -> Result<ReducedWord> {
        if self.letters.iter().any(|l| l.gen() > rank) {
            return Err(Error::Malformed(format!("word does not fit rank {rank}")));
        }
        self.rank = rank;
        Ok(self)
    }

    /// Replaces every generator by its image word and reduces.
    pub fn substitute(&self, images: &[ReducedWord], rank: u32) -> ReducedWord {
        let mut out = ReducedWord::identity(rank);
        for &l in &self.letters {
            let img = &images[(l.gen() - 1) as usize];
            if l.is_inverse() {
                out.push_inverse_of(img.letters());
            } else {
                out.push_reduced(img.letters());
            }
        }
        out
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.letters).finish()
    }
}

/// `⟨a⟩ = wing · core · wing⁻¹` with `core` cyclically reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WingCore {
    pub wing: ReducedWord,
    pub core: ReducedWord,
}

/// Identifies a word with the reduced element it represents when the result
/// needs to be compared with [`reduce`](ReducedWord::reduce) output.
pub fn word(rank: u32, signed: &[i32]) -> ReducedWord {
    ReducedWord::reduce(
        rank,
        signed
            .iter()
            .map(|&s| Letter::from_signed(s).expect("zero letter")),
    )
    .expect("word within rank")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(word(3, &[1, 2, -2, 3]), word(3, &[1, 3]));
        assert!(word(3, &[1, -1]).is_empty());
        assert_eq!(word(3, &[1, -2, 2, 2]), word(3, &[1, 2]));
        assert!(ReducedWord::reduce(2, [Letter::pos(3)]).is_err());
    }

    #[test]
    fn concat_invert_power() {
        let u = word(3, &[1, 2]);
        let v = word(3, &[-2, 1]);
        assert_eq!(u.concat(&v).unwrap(), word(3, &[1, 1]));
        assert_eq!(word(3, &[1, -2]).invert(), word(3, &[2, -1]));
        assert_eq!(word(3, &[1, 2, -1]).power(-2), word(3, &[1, -2, -2, -1]));
        assert!(u.power(0).is_empty());
        assert!(matches!(
            u.concat(&word(4, &[1])),
            Err(Error::RankMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn wing_core_examples() {
        let wc = word(3, &[1, 2, -1]).wing_core().unwrap();
        assert_eq!((wc.wing, wc.core), (word(3, &[1]), word(3, &[2])));
        let wc = word(3, &[2]).wing_core().unwrap();
        assert_eq!((wc.wing, wc.core), (word(3, &[]), word(3, &[2])));
        let wc = word(3, &[1, 2, 1, -2, -1]).wing_core().unwrap();
        assert_eq!((wc.wing, wc.core), (word(3, &[1, 2]), word(3, &[1])));
        assert!(ReducedWord::identity(2).wing_core().is_err());
    }

    #[test]
    fn prefix_and_lcp() {
        assert_eq!(word(3, &[1, 2, 3]).lcp(&word(3, &[1, 2, 1])), 2);
        assert!(word(3, &[1, 2]).prefix(0).unwrap().is_empty());
        assert!(word(3, &[1, 2]).prefix(3).is_err());
    }

    #[test]
    fn junction_only_cancellation() {
        let mut w = word(2, &[1, 2, 1]);
        w.push_reduced(word(2, &[-1, -2, 2]).letters());
        // the argument is not reduced on purpose: only the junction is scanned
        assert_eq!(w.letters(), &[Letter::pos(1), Letter::pos(2)][..]);
    }
}
