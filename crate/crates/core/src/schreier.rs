//! Schreier rewriting of pure σ-words into pure generators.
//!
//! The transversal is [`Permutation::positive_lift`]. Conjugation rules
//! `σ s σ⁻¹` are found by bounded search over short s-words and certified
//! with the Artin action, then cached per strand count.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::artin::braid_images;
use crate::braid::{BraidWord, Permutation, PureGenerator, PureLetter, PureWord};
use crate::error::{Error, Result};
use crate::word::{Letter, ReducedWord};

const MAX_RULE_LEN: usize = 3;

/// `σ_i^{±1} s_ji σ_i^{∓1}` as short pure words, for every σ letter and generator.
#[derive(Debug)]
pub struct ConjTable {
    n: u32,
    rules: HashMap<(Letter, PureGenerator), Vec<PureLetter>>,
}

fn images_of(n: u32, letters: &[PureLetter]) -> Vec<ReducedWord> {
    let w = BraidWord::new(n, letters.iter().flat_map(|l| l.expand()).collect())
        .expect("generators fit n");
    braid_images(&w)
}

/// Reduced s-words of length ≤ `MAX_RULE_LEN` over `gens`, shortest first.
fn candidates(gens: &[PureGenerator]) -> Vec<Vec<PureLetter>> {
    let letters: Vec<PureLetter> = gens
        .iter()
        .flat_map(|&gen| [false, true].map(|inverse| PureLetter { gen, inverse }))
        .collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..MAX_RULE_LEN {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.last().is_some_and(|m: &PureLetter| m.cancels(l)) {
                    continue;
                }
                let mut v: Vec<PureLetter> = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn search(n: u32, target: &[ReducedWord], gens: &[PureGenerator]) -> Option<Vec<PureLetter>> {
    candidates(gens)
        .into_iter()
        .find(|c| images_of(n, c) == target)
}

impl ConjTable {
    pub fn build(n: u32) -> Result<Self> {
        let mut rules = HashMap::new();
        for i in 1..n {
            for inverse in [false, true] {
                let sigma = Letter::new(i, inverse);
                for g in PureGenerator::all(n) {
                    let mut w = vec![sigma];
                    w.extend(g.expand());
                    w.push(sigma.inverse());
                    let target = braid_images(&BraidWord::new(n, w)?);
                    // strands touched by σ_i and s_ji
                    let local: Vec<PureGenerator> = PureGenerator::all(n)
                        .filter(|h| [h.i, h.j].iter().all(|s| [g.i, g.j, i, i + 1].contains(s)))
                        .collect();
                    let found = search(n, &target, &local)
                        .or_else(|| search(n, &target, &PureGenerator::all(n).collect::<Vec<_>>()))
                        .ok_or_else(|| {
                            Error::Internal(format!("no conjugation rule for {sigma:?} {g}"))
                        })?;
                    rules.insert((sigma, g), found);
                }
            }
        }
        Ok(ConjTable { n, rules })
    }

    /// Shared, lazily built table for `n` strands.
    pub fn get(n: u32) -> Result<Arc<ConjTable>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ConjTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("table cache poisoned").get(&n) {
            return Ok(t.clone());
        }
        let table = Arc::new(ConjTable::build(n)?);
        Ok(cache
            .lock()
            .expect("table cache poisoned")
            .entry(n)
            .or_insert(table)
            .clone())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> impl Iterator<Item = (Letter, PureGenerator, &[PureLetter])> {
        self.rules.iter().map(|(&(s, g), w)| (s, g, w.as_slice()))
    }

    /// `σ · l · σ⁻¹` as a pure word, appended to `out` with free cancellation.
    pub fn conjugate_into(&self, sigma: Letter, l: PureLetter, out: &mut PureWord) {
        let rule = &self.rules[&(sigma, l.gen)];
        if l.inverse {
            for &m in rule.iter().rev() {
                out.push_reduced(m.inverse());
            }
        } else {
            for &m in rule {
                out.push_reduced(m);
            }
        }
    }
}

pub fn conj_rule(s: PureLetter, sigma: Letter, n: u32) -> Result<PureWord> {
    if s.gen.j > n || sigma.gen() >= n {
        return Err(Error::Malformed(format!(
            "indices incompatible with n = {n}"
        )));
    }
    let table = ConjTable::get(n)?;
    let mut out = PureWord::identity(n);
    table.conjugate_into(sigma, s, &mut out);
    Ok(out)
}

/// Stateful rewriter with memoized Schreier elements.
#[derive(Debug)]
pub struct Rewriter {
    n: u32,
    table: Arc<ConjTable>,
    memo: HashMap<(Permutation, Letter), PureWord>,
}

impl Rewriter {
    pub fn new(n: u32) -> Result<Self> {
        Ok(Rewriter {
            n,
            table: ConjTable::get(n)?,
            memo: HashMap::new(),
        })
    }

    /// `T(p) · σ · T(p·σ)⁻¹` as a pure word, `T` the positive-lift transversal.
    pub fn element(&mut self, p: &Permutation, l: Letter) -> &PureWord {
        let key = (p.clone(), l);
        if !self.memo.contains_key(&key) {
            let w = self.compute(p, l);
            self.memo.insert(key.clone(), w);
        }
        &self.memo[&key]
    }

    fn compute(&self, p: &Permutation, l: Letter) -> PureWord {
        let i = l.gen();
        let ascent = p.strand_at(i) < p.strand_at(i + 1);
        // positive lifts of p and p·σ_i differ by σ_i on the longer side
        let conjugator = match (ascent, l.is_inverse()) {
            (true, false) | (false, true) => return PureWord::identity(self.n),
            (true, true) => p.positive_lift(),
            (false, false) => {
                let mut q = p.clone();
                q.apply_sigma(i);
                q.positive_lift()
            }
        };
        let core = PureLetter {
            gen: PureGenerator { j: i + 1, i },
            inverse: l.is_inverse(),
        };
        let mut w = PureWord::new(self.n, vec![core]).expect("fits n");
        for &c in conjugator.letters().iter().rev() {
            let mut next = PureWord::identity(self.n);
            for &m in w.letters() {
                self.table.conjugate_into(c, m, &mut next);
            }
            w = next;
        }
        w
    }

    pub fn rewrite(&mut self, gamma: &BraidWord) -> Result<PureWord> {
        if gamma.n() != self.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: gamma.n(),
            });
        }
        let mut p = Permutation::identity(self.n);
        let mut out = PureWord::identity(self.n);
        for &l in gamma.letters() {
            for &m in self.element(&p, l).letters() {
                out.push_reduced(m);
            }
            p.apply_sigma(l.gen());
        }
        if !p.is_identity() {
            return Err(Error::NotPure);
        }
        Ok(out)
    }
}

pub fn sigma_to_pure(gamma: &BraidWord) -> Result<PureWord> {
    if !gamma.is_pure() {
        return Err(Error::NotPure);
    }
    Rewriter::new(gamma.n())?.rewrite(gamma)
}
