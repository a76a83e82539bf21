//! Sixteen candidate conventions for the generators and the Artin action, run
//! against the reference images of x4. Only the adopted one reproduces them.

use braidcomb::artin::braid_images;
use braidcomb::braid::{BraidWord, PureWord};
use braidcomb::golden::{ARTIN_G2_X4, ARTIN_G3_X4, PATH};
use braidcomb::text::parse_free;

type Word = Vec<i32>;

fn reduce(w: impl IntoIterator<Item = i32>) -> Word {
    let mut out: Word = Vec::new();
    for a in w {
        if out.last() == Some(&-a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

fn inv(w: &[i32]) -> Word {
    w.iter().rev().map(|a| -a).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Convention {
    displayed_s: bool,
    formula_b: bool,
    left_compose: bool,
    reversed: bool,
}

impl Convention {
    fn all() -> Vec<Convention> {
        let mut out = Vec::new();
        for bits in 0..16u8 {
            out.push(Convention {
                displayed_s: bits & 1 != 0,
                formula_b: bits & 2 != 0,
                left_compose: bits & 4 != 0,
                reversed: bits & 8 != 0,
            });
        }
        out
    }

    fn adopted() -> Convention {
        Convention {
            displayed_s: false,
            formula_b: false,
            left_compose: true,
            reversed: false,
        }
    }

    /// σ-letters of `s_ji^{±1}`.
    fn expand(self, j: i32, i: i32, inverse: bool) -> Word {
        let mid: Word = (i + 1..j).collect();
        let (pre, post): (Word, Word) = if self.displayed_s {
            (
                mid.iter().rev().copied().collect(),
                mid.iter().map(|a| -a).collect(),
            )
        } else {
            (mid.iter().rev().map(|a| -a).collect(), mid.clone())
        };
        let mut w = pre;
        w.extend([i, i]);
        w.extend(post);
        if inverse {
            inv(&w)
        } else {
            w
        }
    }

    /// Images of `x_1..x_n` under one σ-letter.
    fn letter(self, a: i32, n: i32) -> Vec<Word> {
        let g = if self.reversed { n - a.abs() } else { a.abs() };
        let mut im: Vec<Word> = (1..=n).map(|k| vec![k]).collect();
        let (x, y) = (g, g + 1);
        let (ix, iy) = ((x - 1) as usize, (y - 1) as usize);
        let positive = a > 0;
        match (self.formula_b, positive) {
            (false, true) => {
                im[ix] = vec![y];
                im[iy] = vec![-y, x, y];
            }
            (false, false) => {
                im[ix] = vec![x, y, -x];
                im[iy] = vec![x];
            }
            (true, true) => {
                im[ix] = vec![x, y, -x];
                im[iy] = vec![x];
            }
            (true, false) => {
                im[ix] = vec![y];
                im[iy] = vec![-y, x, y];
            }
        }
        im
    }

    fn images(self, sigma: &[i32], n: i32) -> Vec<Word> {
        let subst = |w: &[i32], table: &[Word]| -> Word {
            reduce(w.iter().flat_map(|&a| {
                let t = &table[(a.abs() - 1) as usize];
                if a > 0 {
                    t.clone()
                } else {
                    inv(t)
                }
            }))
        };
        let mut table: Vec<Word> = (1..=n).map(|k| vec![k]).collect();
        for &a in sigma {
            let step = self.letter(a, n);
            table = if self.left_compose {
                // Φ(w a) = Φ(w) ∘ φ(a)
                step.iter().map(|w| subst(w, &table)).collect()
            } else {
                table.iter().map(|w| subst(w, &step)).collect()
            };
        }
        table
    }
}

fn path_sigma(conv: Convention, t: usize) -> Word {
    PATH.split_whitespace()
        .take(t)
        .flat_map(|tok| {
            let (body, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let (j, i) = body[1..].split_once('.').unwrap();
            conv.expand(j.parse().unwrap(), i.parse().unwrap(), inverse)
        })
        .collect()
}

fn expected(text: &str) -> Word {
    parse_free(text, 4)
        .unwrap()
        .letters()
        .iter()
        .map(|l| l.signed())
        .collect()
}

fn reproduces(conv: Convention) -> bool {
    let x4 = |t: usize| conv.images(&path_sigma(conv, t), 4)[3].clone();
    let g3 = expected(ARTIN_G3_X4);
    x4(2) == expected(ARTIN_G2_X4) && x4(3) == g3 && x4(4) == g3
}

#[test]
fn adopted_convention_is_the_only_match() {
    let matching: Vec<Convention> = Convention::all()
        .into_iter()
        .filter(|&c| reproduces(c))
        .collect();
    assert_eq!(matching, vec![Convention::adopted()]);
}

#[test]
fn library_agrees_with_adopted_convention() {
    let conv = Convention::adopted();
    let path = PureWord::parse(PATH, 4).unwrap();
    for t in 0..=path.len() {
        let braid = PureWord::new(4, path.letters()[..t].to_vec())
            .unwrap()
            .to_braid();
        let sigma: Word = braid.letters().iter().map(|l| l.signed()).collect();
        assert_eq!(sigma, path_sigma(conv, t));
        let lib: Vec<Word> = braid_images(&braid)
            .iter()
            .map(|w| w.letters().iter().map(|l| l.signed()).collect())
            .collect();
        assert_eq!(lib, conv.images(&sigma, 4));
    }
}

#[test]
fn displayed_generators_break_the_second_row() {
    let action = Convention::adopted();
    for (displayed, holds) in [(false, true), (true, false)] {
        let conv = Convention {
            displayed_s: displayed,
            ..action
        };
        let lhs: Word = [conv.expand(3, 1, true), conv.expand(4, 1, false)].concat();
        let rhs: Word = [
            conv.expand(4, 3, false),
            conv.expand(4, 1, false),
            conv.expand(4, 3, true),
            conv.expand(3, 1, true),
        ]
        .concat();
        assert_eq!(action.images(&lhs, 4) == action.images(&rhs, 4), holds);
    }
}

#[test]
fn braid_parse_matches_expansion() {
    let conv = Convention::adopted();
    let b = BraidWord::parse("b2^-1 b1 b1 b2", 4).unwrap();
    let sigma: Word = b.letters().iter().map(|l| l.signed()).collect();
    assert_eq!(sigma, conv.expand(3, 1, false));
}
