//! Markov–Ivanovsky combing.
//!
//! A pure braid on `n` strands factors uniquely as `V_{n−1} ⋯ V_1` with
//! `V_m` a reduced word in `y_j = s_{(m+1)j}`, `1 ≤ j ≤ m`. Combing pushes
//! lower-level letters to the right: appending `y` after `x·α` gives
//! `x · (α y α⁻¹) · α`.
//!
//! Conjugation of the `y` letters by σ_i (`i ≤ m−1`):
//!
//! ```text
//! σ_i   : y_i ↦ y_i⁻¹ y_{i+1} y_i,   y_{i+1} ↦ y_i
//! σ_i⁻¹ : y_i ↦ y_{i+1},             y_{i+1} ↦ y_{i+1} y_i y_{i+1}⁻¹
//! ```

use std::collections::HashMap;
use std::fmt;

use crate::braid::{coset_decompose, BraidWord, Permutation, PureGenerator, PureLetter, PureWord};
use crate::error::{Error, Result};
use crate::schreier::Rewriter;
use crate::text;
use crate::word::{Letter, ReducedWord};

pub const DEFAULT_LENGTH_GUARD: usize = 1_000_000;

/// The normal form: parts `V_{n−1}, …, V_1` and a positive coset word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MIForm {
    n: u32,
    parts: Vec<ReducedWord>,
    coset: BraidWord,
}

/// A token of the flattened normal form, separators included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlatToken {
    Pure(PureLetter),
    PartSep,
    CosetSep,
    Sigma(Letter),
}

impl MIForm {
    pub fn identity(n: u32) -> Self {
        assert!(n >= 2, "combing needs at least two strands");
        MIForm {
            n,
            parts: (1..n).rev().map(ReducedWord::identity).collect(),
            coset: BraidWord::identity(n),
        }
    }

    pub fn new(n: u32, parts: Vec<ReducedWord>, coset: BraidWord) -> Result<Self> {
        if n < 2 || parts.len() as u32 != n - 1 || coset.n() != n {
            return Err(Error::Malformed(format!(
                "form shape does not match n = {n}"
            )));
        }
        for (k, p) in parts.iter().enumerate() {
            if p.rank() != n - 1 - k as u32 {
                return Err(Error::Malformed(format!("part {k} has rank {}", p.rank())));
            }
        }
        if coset != coset.perm().positive_lift() {
            return Err(Error::Malformed("coset is not a transversal word".into()));
        }
        Ok(MIForm { n, parts, coset })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Parts in print order, `V_{n−1}` first.
    pub fn parts(&self) -> &[ReducedWord] {
        &self.parts
    }

    /// `V_m` for `1 ≤ m ≤ n−1`.
    pub fn part(&self, m: u32) -> &ReducedWord {
        &self.parts[(self.n - 1 - m) as usize]
    }

    pub fn coset(&self) -> &BraidWord {
        &self.coset
    }

    /// Letters of `V_m` as pure generators `s_{(m+1)j}`.
    fn part_letters(&self, k: usize) -> impl Iterator<Item = PureLetter> + '_ {
        let top = self.n - k as u32;
        self.parts[k].letters().iter().map(move |l| PureLetter {
            gen: PureGenerator { j: top, i: l.gen() },
            inverse: l.is_inverse(),
        })
    }

    pub fn pure_letters(&self) -> impl Iterator<Item = PureLetter> + '_ {
        (0..self.parts.len()).flat_map(|k| self.part_letters(k))
    }

    pub fn tokens(&self) -> Vec<FlatToken> {
        let mut out = Vec::with_capacity(self.letter_count() + self.parts.len());
        for k in 0..self.parts.len() {
            if k > 0 {
                out.push(FlatToken::PartSep);
            }
            out.extend(self.part_letters(k).map(FlatToken::Pure));
        }
        out.push(FlatToken::CosetSep);
        out.extend(self.coset.letters().iter().map(|&l| FlatToken::Sigma(l)));
        out
    }

    /// Letters in all parts plus the coset, separators excluded.
    pub fn letter_count(&self) -> usize {
        self.parts.iter().map(ReducedWord::len).sum::<usize>() + self.coset.len()
    }

    pub fn flatten(&self) -> BraidWord {
        let mut letters: Vec<Letter> = self.pure_letters().flat_map(|l| l.expand()).collect();
        letters.extend_from_slice(self.coset.letters());
        BraidWord::new(self.n, letters).expect("letters fit n")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (left, right, right_at) = match text.find(';') {
            Some(k) => (&text[..k], &text[k + 1..], k + 1),
            None => return Err(Error::parse(text.len(), "expected ' ; ' before the coset")),
        };
        let mut spans = Vec::new();
        let mut start = 0;
        for piece in left.split('|') {
            spans.push((start, piece));
            start += piece.len() + 1;
        }
        let n = spans.len() as u32 + 1;
        let shift = |e: Error, by: usize| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
            other => other,
        };
        let mut parts = Vec::with_capacity(spans.len());
        for (k, (at, piece)) in spans.into_iter().enumerate() {
            let m = n - 1 - k as u32;
            let mut part = ReducedWord::identity(m);
            for t in text::parse_tokens(piece).map_err(|e| shift(e, at))? {
                match t.base {
                    text::Base::Pure(j, i) if j == m + 1 => {
                        let mut raw = Vec::new();
                        text::push_power(&mut raw, Letter::pos(i), t.exp);
                        for l in raw {
                            part.push(l);
                        }
                    }
                    _ => {
                        return Err(Error::parse(
                            at + t.pos,
                            format!("part V{m} only takes s{}.j letters", m + 1),
                        ))
                    }
                }
            }
            parts.push(part);
        }
        let coset = BraidWord::parse(right, n).map_err(|e| shift(e, right_at))?;
        if coset.letters().iter().any(|l| l.is_inverse()) {
            return Err(Error::parse(right_at, "coset must be a positive word"));
        }
        MIForm::new(n, parts, coset)
    }
}

impl fmt::Display for MIForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.parts.len() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            let letters = self.part_letters(k).map(|l| (l.gen.j, l.gen.i, l.inverse));
            f.write_str(&text::format_pure(letters))?;
        }
        write!(f, " ; {}", self.coset)
    }
}

impl fmt::Debug for MIForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MIForm({self})")
    }
}

/// Generator images of conjugation by σ_l on the y-alphabet of rank `m`.
fn y_action(l: Letter, m: u32) -> Vec<ReducedWord> {
    let mut gens: Vec<ReducedWord> = (1..=m)
        .map(|k| ReducedWord::from_reduced(m, vec![Letter::pos(k)]))
        .collect();
    push_y_sigma(&mut gens, l);
    gens
}

/// Right-composes conjugation images with σ_l: `R ← R ∘ R_σ`.
fn push_y_sigma(images: &mut [ReducedWord], l: Letter) {
    let i = (l.gen() - 1) as usize;
    let a = images[i].clone();
    let b = images[i + 1].clone();
    if l.is_inverse() {
        let mut w = b.clone();
        w.push_reduced(a.letters());
        w.push_inverse_of(b.letters());
        images[i] = b;
        images[i + 1] = w;
    } else {
        let mut w = a.invert();
        w.push_reduced(b.letters());
        w.push_reduced(a.letters());
        images[i] = w;
        images[i + 1] = a;
    }
}

/// `α f α⁻¹` as a y-word, applying α's σ letters last to first.
pub fn rho_action(alpha: &PureWord, f: &ReducedWord) -> Result<ReducedWord> {
    let m = f.rank();
    if alpha.n() != m {
        return Err(Error::RankMismatch {
            left: alpha.n(),
            right: m,
        });
    }
    let mut out = f.clone();
    for &c in alpha.to_braid().letters().iter().rev() {
        out = out.substitute(&y_action(c, m), m);
    }
    Ok(out)
}

/// One level of the semidirect splitting `γ = x · α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitState {
    pub x: ReducedWord,
    pub alpha: PureWord,
}

pub fn split(gamma: &PureWord) -> Result<SplitState> {
    let top = gamma.n();
    if top < 2 {
        return Err(Error::Malformed(
            "splitting needs at least two strands".into(),
        ));
    }
    let m = top - 1;
    let mut x = ReducedWord::identity(m);
    let mut alpha = PureWord::identity(m);
    for &l in gamma.letters() {
        if l.gen.j == top {
            let y = ReducedWord::from_reduced(m, vec![Letter::new(l.gen.i, l.inverse)]);
            x.push_reduced(rho_action(&alpha, &y)?.letters());
        } else {
            alpha.push(l);
        }
    }
    Ok(SplitState { x, alpha })
}

/// Batch route: recursive splitting with from-scratch conjugation.
pub fn mi_pure_by_split(gamma: &PureWord) -> Result<MIForm> {
    let n = gamma.n();
    let mut parts = Vec::new();
    let mut rest = gamma.clone();
    while rest.n() >= 2 {
        let s = split(&rest)?;
        parts.push(s.x);
        rest = s.alpha;
    }
    MIForm::new(n, parts, BraidWord::identity(n))
}

#[derive(Clone, Debug)]
struct Level {
    x: ReducedWord,
    images: Vec<ReducedWord>,
}

/// Incremental combing along right multiplication.
#[derive(Debug)]
pub struct CombState {
    n: u32,
    levels: Vec<Level>,
    perm: Permutation,
    rewriter: Option<Rewriter>,
    guard: usize,
}

impl CombState {
    pub fn new(n: u32) -> Self {
        Self::with_guard(n, DEFAULT_LENGTH_GUARD)
    }

    pub fn with_guard(n: u32, guard: usize) -> Self {
        assert!(n >= 2, "combing needs at least two strands");
        let levels = (2..=n)
            .rev()
            .map(|top| {
                let m = top - 1;
                Level {
                    x: ReducedWord::identity(m),
                    images: (1..=m)
                        .map(|k| ReducedWord::from_reduced(m, vec![Letter::pos(k)]))
                        .collect(),
                }
            })
            .collect();
        CombState {
            n,
            levels,
            perm: Permutation::identity(n),
            rewriter: None,
            guard,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// Letters held by the state: all parts and all conjugation images.
    pub fn size(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.x.len() + l.images.iter().map(ReducedWord::len).sum::<usize>())
            .sum()
    }

    /// Top part `V_{n−1}`.
    pub fn top(&self) -> &ReducedWord {
        &self.levels[0].x
    }

    fn check_guard(&self) -> Result<()> {
        let size = self.size();
        if size > self.guard {
            return Err(Error::LengthGuard {
                limit: self.guard,
                reached: size,
            });
        }
        Ok(())
    }

    fn push_pure_unchecked(&mut self, l: PureLetter) {
        for (k, level) in self.levels.iter_mut().enumerate() {
            let top = self.n - k as u32;
            if l.gen.j == top {
                let img = &level.images[(l.gen.i - 1) as usize];
                if l.inverse {
                    level.x.push_inverse_of(img.letters());
                } else {
                    level.x.push_reduced(img.letters());
                }
                return;
            }
            for c in l.expand() {
                push_y_sigma(&mut level.images, c);
            }
        }
    }

    /// Right-multiplies by a pure generator.
    pub fn step_pure(&mut self, l: PureLetter) -> Result<()> {
        if l.gen.j > self.n {
            return Err(Error::Malformed(format!(
                "{l} out of range for n = {}",
                self.n
            )));
        }
        if self.perm.is_identity() {
            self.push_pure_unchecked(l);
            return self.check_guard();
        }
        for c in l.expand() {
            self.step_sigma(c)?;
        }
        Ok(())
    }

    /// Right-multiplies by σ_i^{±1}.
    pub fn step_sigma(&mut self, l: Letter) -> Result<()> {
        if l.gen() >= self.n {
            return Err(Error::Malformed(format!(
                "σ{} out of range for n = {}",
                l.gen(),
                self.n
            )));
        }
        if self.rewriter.is_none() {
            self.rewriter = Some(Rewriter::new(self.n)?);
        }
        let elem = self
            .rewriter
            .as_mut()
            .expect("set above")
            .element(&self.perm, l)
            .clone();
        for &m in elem.letters() {
            self.push_pure_unchecked(m);
        }
        self.perm.apply_sigma(l.gen());
        self.check_guard()
    }

    pub fn form(&self) -> MIForm {
        MIForm {
            n: self.n,
            parts: self.levels.iter().map(|l| l.x.clone()).collect(),
            coset: self.perm.positive_lift(),
        }
    }
}

pub fn mi_pure(gamma: &PureWord) -> Result<MIForm> {
    mi_pure_with_guard(gamma, DEFAULT_LENGTH_GUARD)
}

/// Combs from the left, so only the parts of the running suffix are held and
/// the guard bounds their total length.
pub fn mi_pure_with_guard(gamma: &PureWord, guard: usize) -> Result<MIForm> {
    let n = gamma.n();
    let letters = gamma.letters();
    // a suffix already in level order is its own form
    let mut start = letters.len();
    while start > 0 && (start == letters.len() || letters[start - 1].gen.j >= letters[start].gen.j)
    {
        start -= 1;
    }
    let mut parts: Vec<ReducedWord> = (2..=n)
        .rev()
        .map(|top| ReducedWord::identity(top - 1))
        .collect();
    for l in &letters[start..] {
        parts[(n - l.gen.j) as usize].push_reduced(&[Letter::new(l.gen.i, l.inverse)]);
    }
    let comber = LeftComber::new(n);
    for &l in letters[..start].iter().rev() {
        comber.step(&mut parts, l);
        let size: usize = parts.iter().map(ReducedWord::len).sum();
        if size > guard {
            return Err(Error::LengthGuard {
                limit: guard,
                reached: size,
            });
        }
    }
    MIForm::new(n, parts, BraidWord::identity(n))
}

/// Conjugation images `ρ(s)(y_k)` of every generator below each level.
struct LeftComber {
    n: u32,
    images: HashMap<(u32, PureLetter), Vec<ReducedWord>>,
}

impl LeftComber {
    fn new(n: u32) -> Self {
        let mut images = HashMap::new();
        for top in 3..=n {
            let m = top - 1;
            for gen in PureGenerator::all(m) {
                for inverse in [false, true] {
                    let l = PureLetter { gen, inverse };
                    let mut im: Vec<ReducedWord> = (1..=m)
                        .map(|k| ReducedWord::from_reduced(m, vec![Letter::pos(k)]))
                        .collect();
                    for c in l.expand() {
                        push_y_sigma(&mut im, c);
                    }
                    images.insert((top, l), im);
                }
            }
        }
        LeftComber { n, images }
    }

    /// `parts ← 𝔍(l · γ)` where `parts = 𝔍(γ)`.
    ///
    /// With `γ = x α`: a top letter joins `x`; otherwise `l x α = (l x l⁻¹)(l α)`.
    fn step(&self, parts: &mut [ReducedWord], l: PureLetter) {
        for (k, part) in parts.iter_mut().enumerate() {
            let top = self.n - k as u32;
            let m = top - 1;
            if l.gen.j == top {
                let mut w = ReducedWord::from_reduced(m, vec![Letter::new(l.gen.i, l.inverse)]);
                w.push_reduced(part.letters());
                *part = w;
                return;
            }
            *part = part.substitute(&self.images[&(top, l)], m);
        }
    }
}

pub fn mi_braid(beta: &BraidWord) -> Result<MIForm> {
    mi_braid_with_guard(beta, DEFAULT_LENGTH_GUARD)
}

pub fn mi_braid_with_guard(beta: &BraidWord, guard: usize) -> Result<MIForm> {
    let (gamma, pi) = coset_decompose(beta);
    let pure = match parse_expansions(&gamma) {
        Some(p) => p,
        None => Rewriter::new(beta.n())?.rewrite(&gamma)?,
    };
    let mut form = mi_pure_with_guard(&pure, guard)?;
    form.coset = pi;
    Ok(form)
}

/// Reads a σ-word as a concatenation of generator expansions, if it is one.
fn parse_expansions(beta: &BraidWord) -> Option<PureWord> {
    let n = beta.n();
    let word = beta.letters();
    let blocks: Vec<(PureLetter, Vec<Letter>)> = PureGenerator::all(n)
        .flat_map(|gen| [false, true].map(|inverse| PureLetter { gen, inverse }))
        .map(|l| (l, l.expand()))
        .collect();
    // back[p] = block ending at p on some parse of word[..p]
    let mut back: Vec<Option<(usize, PureLetter)>> = vec![None; word.len() + 1];
    let mut reached = vec![false; word.len() + 1];
    reached[0] = true;
    for p in 0..word.len() {
        if !reached[p] {
            continue;
        }
        for (l, e) in &blocks {
            let q = p + e.len();
            if q <= word.len() && !reached[q] && word[p..q] == e[..] {
                reached[q] = true;
                back[q] = Some((p, *l));
            }
        }
    }
    if !reached[word.len()] {
        return None;
    }
    let mut out = Vec::new();
    let mut q = word.len();
    while q > 0 {
        let (p, l) = back[q].expect("reached positions have a block");
        out.push(l);
        q = p;
    }
    out.reverse();
    PureWord::new(n, out).ok()
}

/// `s_{n(n−1)} ⋯ s_{n1}`, equal to σ_{n−1}⋯σ_1σ_1⋯σ_{n−1}.
pub fn central_element(n: u32) -> Result<PureWord> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "central element needs n ≥ 3, got {n}"
        )));
    }
    let letters = (1..n)
        .rev()
        .map(|i| PureLetter {
            gen: PureGenerator { j: n, i },
            inverse: false,
        })
        .collect();
    PureWord::new(n, letters)
}

/// The central element as a word in `y_j = s_{nj}`.
pub fn central_y_word(n: u32) -> Result<ReducedWord> {
    let u = central_element(n)?;
    Ok(ReducedWord::from_reduced(
        n - 1,
        u.letters()
            .iter()
            .map(|l| Letter::new(l.gen.i, l.inverse))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::braid_equal;

    fn pw(s: &str) -> PureWord {
        PureWord::parse(s, 4).unwrap()
    }

    #[test]
    fn rho_examples() {
        let y1 = ReducedWord::from_reduced(3, vec![Letter::pos(1)]);
        assert_eq!(rho_action(&PureWord::identity(3), &y1).unwrap(), y1);
        let a = PureWord::parse("s3.1^-1", 3).unwrap();
        let got = rho_action(&a, &y1).unwrap();
        assert_eq!(text::format_free(got.letters(), "y"), "y3 y1 y3^-1");
    }

    #[test]
    fn split_examples() {
        let s = split(&pw("s4.1")).unwrap();
        assert_eq!(text::format_free(s.x.letters(), "y"), "y1");
        assert!(s.alpha.is_empty());
        let s = split(&pw("s3.1^-1 s4.1")).unwrap();
        assert_eq!(text::format_free(s.x.letters(), "y"), "y3 y1 y3^-1");
        assert_eq!(s.alpha.to_string(), "s3.1^-1");
        let s = split(&pw("s3.1^-1")).unwrap();
        assert!(s.x.is_empty());
    }

    #[test]
    fn mi_examples() {
        assert_eq!(mi_pure(&pw("")).unwrap().to_string(), "e | e | e ; e");
        assert_eq!(
            mi_pure(&pw("s3.1^-1 s4.1")).unwrap().to_string(),
            "s4.3 s4.1 s4.3^-1 | s3.1^-1 | e ; e"
        );
        let f = mi_braid(&BraidWord::parse("b1", 4).unwrap()).unwrap();
        assert_eq!(f.to_string(), "e | e | e ; b1");
        let f = mi_braid(&BraidWord::parse("b1 b1", 4).unwrap()).unwrap();
        assert_eq!(f.to_string(), "e | e | s2.1 ; e");
    }

    #[test]
    fn step_and_back() {
        let mut st = CombState::new(4);
        for l in pw("s3.1^-1 s4.1 s4.3^-1").letters() {
            st.step_pure(*l).unwrap();
        }
        let before = st.form();
        st.step_sigma(Letter::pos(2)).unwrap();
        st.step_sigma(Letter::neg(2)).unwrap();
        assert_eq!(st.form(), before);
        let g = PureLetter::new(3, 2, false).unwrap();
        st.step_pure(g).unwrap();
        st.step_pure(g.inverse()).unwrap();
        assert_eq!(st.form(), before);
    }

    #[test]
    fn print_parse_round_trip() {
        let f = mi_braid(&BraidWord::parse("b2 s4.1 b3^-1 s3.2", 4).unwrap()).unwrap();
        assert_eq!(MIForm::parse(&f.to_string()).unwrap(), f);
        assert_eq!(MIForm::parse("e | e | e ; e").unwrap(), MIForm::identity(4));
        assert!(matches!(
            MIForm::parse("e | s4.1 | e ; e"),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(MIForm::parse("e | e | e").is_err());
        assert!(MIForm::parse("e | e | e ; b1 b1").is_err());
    }

    #[test]
    fn central_examples() {
        let u = central_element(4).unwrap();
        assert_eq!(u.to_string(), "s4.3 s4.2 s4.1");
        let full = BraidWord::parse("b3 b2 b1 b1 b2 b3", 4).unwrap();
        assert!(braid_equal(&u.to_braid(), &full).unwrap());
        let s21 = PureWord::parse("s2.1", 4).unwrap().to_braid();
        let ub = u.to_braid();
        assert!(braid_equal(&ub.concat(&s21).unwrap(), &s21.concat(&ub).unwrap()).unwrap());
        assert!(central_element(2).is_err());
    }

    #[test]
    fn guard_trips() {
        let g = pw("s3.1^-1 s4.1 s4.3^-1 s3.2^-1 s4.2 s2.1 s3.2 s4.1^-1 s4.2^-1");
        assert!(matches!(
            mi_pure_with_guard(&g, 10),
            Err(Error::LengthGuard { limit: 10, .. })
        ));
    }
}
