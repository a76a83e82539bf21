//! The Artin representation B_n → Aut(F_n).
//!
//! Generator convention (fixed by calibration against reference data):
//!
//! ```text
//! σ_i   : x_i ↦ x_{i+1},             x_{i+1} ↦ x_{i+1}⁻¹ x_i x_{i+1}
//! σ_i⁻¹ : x_i ↦ x_i x_{i+1} x_i⁻¹,   x_{i+1} ↦ x_i
//! ```
//!
//! and a word acts by `Φ(a_1 ⋯ a_k) = φ(a_1) ∘ ⋯ ∘ φ(a_k)`, so the last
//! letter is applied first and `Φ` is a homomorphism.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::word::{Letter, ReducedWord};

/// Images of x_1, …, x_n under an automorphism, with the inverse's images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeAutomorphism {
    images: Vec<ReducedWord>,
    inverse_images: Vec<ReducedWord>,
}

fn generators(n: u32) -> Vec<ReducedWord> {
    (1..=n)
        .map(|k| ReducedWord::from_reduced(n, vec![Letter::pos(k)]))
        .collect()
}

/// Right-composes the image table with the generator automorphism of `l`.
pub(crate) fn push_sigma(images: &mut [ReducedWord], l: Letter) {
    let i = (l.gen() - 1) as usize;
    let a = images[i].clone();
    let b = images[i + 1].clone();
    if l.is_inverse() {
        let mut w = a.clone();
        w.push_reduced(b.letters());
        w.push_inverse_of(a.letters());
        images[i] = w;
        images[i + 1] = a;
    } else {
        let mut w = b.invert();
        w.push_reduced(a.letters());
        w.push_reduced(b.letters());
        images[i] = b;
        images[i + 1] = w;
    }
}

/// Left-composes: replaces each image `w` by `φ(l)(w)`.
fn pre_sigma(images: &mut [ReducedWord], l: Letter) {
    let n = images.len() as u32;
    let mut gens = generators(n);
    push_sigma(&mut gens, l);
    for w in images.iter_mut() {
        *w = w.substitute(&gens, n);
    }
}

impl FreeAutomorphism {
    pub fn identity(n: u32) -> Self {
        FreeAutomorphism {
            images: generators(n),
            inverse_images: generators(n),
        }
    }

    pub fn rank(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn images(&self) -> &[ReducedWord] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[ReducedWord] {
        &self.inverse_images
    }

    pub fn apply(&self, t: &ReducedWord) -> Result<ReducedWord> {
        if t.rank() != self.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: t.rank(),
            });
        }
        Ok(t.substitute(&self.images, self.rank()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeAutomorphism) -> Result<FreeAutomorphism> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let n = self.rank();
        Ok(FreeAutomorphism {
            images: other
                .images
                .iter()
                .map(|w| w.substitute(&self.images, n))
                .collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|w| w.substitute(&other.inverse_images, n))
                .collect(),
        })
    }

    /// Checks that the stored inverse really inverts the map.
    pub fn is_certified(&self) -> bool {
        let n = self.rank();
        let gens = generators(n);
        self.images
            .iter()
            .map(|w| w.substitute(&self.inverse_images, n))
            .eq(gens.iter().cloned())
            && self
                .inverse_images
                .iter()
                .map(|w| w.substitute(&self.images, n))
                .eq(gens)
    }
}

pub fn artin_auto(l: Letter, n: u32) -> Result<FreeAutomorphism> {
    if l.gen() >= n {
        return Err(Error::Malformed(format!(
            "σ{} out of range for n = {n}",
            l.gen()
        )));
    }
    let mut a = FreeAutomorphism::identity(n);
    push_sigma(&mut a.images, l);
    push_sigma(&mut a.inverse_images, l.inverse());
    Ok(a)
}

/// The automorphism of a braid word, images only.
pub fn braid_images(w: &BraidWord) -> Vec<ReducedWord> {
    let mut images = generators(w.n());
    for &l in w.letters() {
        push_sigma(&mut images, l);
    }
    images
}

/// The automorphism of a braid word together with its inverse.
pub fn braid_automorphism(w: &BraidWord) -> FreeAutomorphism {
    let mut inverse_images = generators(w.n());
    for &l in w.letters() {
        pre_sigma(&mut inverse_images, l.inverse());
    }
    FreeAutomorphism {
        images: braid_images(w),
        inverse_images,
    }
}

pub fn apply_braid(w: &BraidWord, t: &ReducedWord) -> Result<ReducedWord> {
    if t.rank() != w.n() {
        return Err(Error::RankMismatch {
            left: w.n(),
            right: t.rank(),
        });
    }
    Ok(t.substitute(&braid_images(w), w.n()))
}

/// Decides braid equality through the faithful Artin action.
pub fn braid_equal(u: &BraidWord, v: &BraidWord) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::RankMismatch {
            left: u.n(),
            right: v.n(),
        });
    }
    Ok(braid_images(u) == braid_images(v))
}

/// Images of `w`, or `None` once their total length passes `budget`.
pub fn braid_images_bounded(w: &BraidWord, budget: usize) -> Option<Vec<ReducedWord>> {
    let mut images = generators(w.n());
    for &l in w.letters() {
        push_sigma(&mut images, l);
        let i = (l.gen() - 1) as usize;
        let total: usize = images.iter().map(ReducedWord::len).sum();
        if images[i].len() + images[i + 1].len() > budget || total > budget {
            return None;
        }
    }
    Some(images)
}

/// Exact equality when both image tables fit in `budget` letters.
pub fn braid_equal_bounded(u: &BraidWord, v: &BraidWord, budget: usize) -> Result<Option<bool>> {
    if u.n() != v.n() {
        return Err(Error::RankMismatch {
            left: u.n(),
            right: v.n(),
        });
    }
    Ok(
        match (
            braid_images_bounded(u, budget),
            braid_images_bounded(v, budget),
        ) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        },
    )
}

type Mat = [u64; 4];

const SKETCH_PRIMES: [u64; 2] = [(1 << 61) - 1, (1 << 62) - 57];

fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let m = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    let add = |x: u64, y: u64| ((x as u128 + y as u128) % p as u128) as u64;
    [
        add(m(a[0], b[0]), m(a[1], b[2])),
        add(m(a[0], b[1]), m(a[1], b[3])),
        add(m(a[2], b[0]), m(a[3], b[2])),
        add(m(a[2], b[1]), m(a[3], b[3])),
    ]
}

// determinant one
fn mat_inv(a: &Mat, p: u64) -> Mat {
    [a[3], (p - a[1]) % p, (p - a[2]) % p, a[0]]
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// The Artin action pushed through fixed random maps `F_n → SL_2(𝔽_p)`.
///
/// Equal braids always get equal sketches. Distinct braids collide only if a
/// nontrivial reduced word, no longer than the Artin images involved, maps to
/// the identity in both primes; for random matrices that has probability of
/// order `length / p` per prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArtinSketch {
    n: u32,
    images: Vec<[Mat; 2]>,
}

impl ArtinSketch {
    fn generators(n: u32) -> Vec<[Mat; 2]> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_a271);
        (0..n)
            .map(|_| {
                SKETCH_PRIMES.map(|p| {
                    let a = rng.gen_range(1..p);
                    let (b, c) = (rng.gen_range(0..p), rng.gen_range(0..p));
                    let bc = (b as u128 * c as u128 % p as u128) as u64;
                    let d = ((1 + bc as u128) * pow_mod(a, p - 2, p) as u128 % p as u128) as u64;
                    [a, b, c, d]
                })
            })
            .collect()
    }

    pub fn of(w: &BraidWord) -> Self {
        let mut images = ArtinSketch::generators(w.n());
        for &l in w.letters() {
            let i = (l.gen() - 1) as usize;
            for (k, p) in SKETCH_PRIMES.into_iter().enumerate() {
                let (a, b) = (images[i][k], images[i + 1][k]);
                if l.is_inverse() {
                    images[i][k] = mat_mul(&mat_mul(&a, &b, p), &mat_inv(&a, p), p);
                    images[i + 1][k] = a;
                } else {
                    images[i][k] = b;
                    images[i + 1][k] = mat_mul(&mat_mul(&mat_inv(&b, p), &a, p), &b, p);
                }
            }
        }
        ArtinSketch { n: w.n(), images }
    }
}

/// Braid equality through [`ArtinSketch`]: never a false negative.
pub fn braid_equal_sketch(u: &BraidWord, v: &BraidWord) -> Result<bool> {
    if u.n() != v.n() {
        return Err(Error::RankMismatch {
            left: u.n(),
            right: v.n(),
        });
    }
    Ok(ArtinSketch::of(u) == ArtinSketch::of(v))
}

/// Splits `W = A x_i A⁻¹` and returns `A`.
pub fn a_word_from_image(image: &ReducedWord, i: u32) -> Result<ReducedWord> {
    let len = image.len();
    let shape_error = || Error::Internal(format!("image of x{i} is not a conjugate of x{i}"));
    if len.is_multiple_of(2) {
        return Err(shape_error());
    }
    let m = len / 2;
    if image.letters()[m] != Letter::pos(i) {
        return Err(shape_error());
    }
    let a = image.prefix(m)?;
    let mut check = a.clone();
    check.push(Letter::pos(i));
    check.push_inverse_of(a.letters());
    if &check != image {
        return Err(shape_error());
    }
    Ok(a)
}

/// `A_i(γ)` with `γ(x_i) = A_i(γ) x_i A_i(γ)⁻¹`.
pub fn a_word(gamma: &BraidWord, i: u32) -> Result<ReducedWord> {
    if !gamma.is_pure() {
        return Err(Error::NotPure);
    }
    if i == 0 || i > gamma.n() {
        return Err(Error::Malformed(format!(
            "x{i} out of range for n = {}",
            gamma.n()
        )));
    }
    let images = braid_images(gamma);
    a_word_from_image(&images[(i - 1) as usize], i)
}

/// Which signs of a generator count as an occurrence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignPolicy {
    #[default]
    Both,
    PositiveOnly,
    NegativeOnly,
}

impl SignPolicy {
    pub fn count(self, w: &ReducedWord, gen: u32) -> i64 {
        w.letters()
            .iter()
            .filter(|l| l.gen() == gen)
            .filter(|l| match self {
                SignPolicy::Both => true,
                SignPolicy::PositiveOnly => !l.is_inverse(),
                SignPolicy::NegativeOnly => l.is_inverse(),
            })
            .count() as i64
    }

    /// `#_p w / #_q w`, `None` when the denominator vanishes.
    pub fn ratio(self, w: &ReducedWord, p: u32, q: u32) -> Option<Rational64> {
        let den = self.count(w, q);
        (den != 0).then(|| Rational64::new(self.count(w, p), den))
    }
}

pub fn occurrence_ratio(
    gamma: &BraidWord,
    i: u32,
    p: u32,
    q: u32,
    policy: SignPolicy,
) -> Result<Option<Rational64>> {
    let n = gamma.n();
    if p == 0 || q == 0 || p > n || q > n {
        return Err(Error::Malformed(format!(
            "occurrence indices out of range for n = {n}"
        )));
    }
    Ok(policy.ratio(&a_word(gamma, i)?, p, q))
}
