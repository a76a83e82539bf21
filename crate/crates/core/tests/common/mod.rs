#![allow(dead_code)]

use braidcomb::braid::{BraidWord, PureGenerator, PureLetter, PureWord};
use braidcomb::word::{Letter, ReducedWord};
use rand::Rng;

pub fn random_pure(rng: &mut impl Rng, n: u32, max_len: usize) -> PureWord {
    let gens: Vec<PureGenerator> = PureGenerator::all(n).collect();
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| PureLetter {
            gen: gens[rng.gen_range(0..gens.len())],
            inverse: rng.gen(),
        })
        .collect();
    PureWord::new(n, letters).unwrap()
}

pub fn random_sigma(rng: &mut impl Rng, n: u32, len: usize) -> BraidWord {
    let letters = (0..len)
        .map(|_| Letter::new(rng.gen_range(1..n), rng.gen()))
        .collect();
    BraidWord::new(n, letters).unwrap()
}

/// A reduced word of exactly `len` letters.
pub fn random_reduced(rng: &mut impl Rng, rank: u32, len: usize) -> ReducedWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(1..=rank), rng.gen());
        if letters.last().is_none_or(|p| !p.cancels(l)) {
            letters.push(l);
        }
    }
    ReducedWord::reduce(rank, letters).unwrap()
}

/// Every reduced word of length exactly `len`.
pub fn all_reduced(rank: u32, len: usize) -> Vec<ReducedWord> {
    let mut layer: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 1..=rank {
                for l in [Letter::pos(g), Letter::neg(g)] {
                    if w.last().is_none_or(|p| !p.cancels(l)) {
                        let mut v = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
        }
        layer = next;
    }
    layer
        .into_iter()
        .map(|w| ReducedWord::reduce(rank, w).unwrap())
        .collect()
}
