//! Contraction checks on the boundary of a free group, and the convolution
//! constant of a finitely supported step distribution.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{CheckedAdd, One, Zero};

use crate::artin::push_sigma;
use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::point::{gromov, left_translate, pow_infinity, BoundaryPoint, GromovValue, Point};
use crate::text::format_free;
use crate::walker::{GeneratorDistribution, WalkLetter};
use crate::word::{Letter, ReducedWord};

/// A finitely supported probability measure on rational boundary points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    atoms: BTreeMap<BoundaryPoint, Rational64>,
}

impl EmpiricalMeasure {
    /// Repeated points are merged.
    pub fn new(atoms: impl IntoIterator<Item = (BoundaryPoint, Rational64)>) -> Result<Self> {
        let mut map: BTreeMap<BoundaryPoint, Rational64> = BTreeMap::new();
        let mut rank = None;
        for (p, w) in atoms {
            if w <= Rational64::zero() {
                return Err(Error::Malformed(format!("atom weight {w} is not positive")));
            }
            match rank {
                None => rank = Some(p.rank()),
                Some(r) if r != p.rank() => {
                    return Err(Error::RankMismatch {
                        left: r,
                        right: p.rank(),
                    })
                }
                _ => {}
            }
            let slot = map.entry(p).or_insert_with(Rational64::zero);
            *slot = CheckedAdd::checked_add(&*slot, &w)
                .ok_or_else(|| Error::Malformed("atom weights overflow".into()))?;
        }
        if map.is_empty() {
            return Err(Error::Malformed("measure has no atoms".into()));
        }
        let total = map.values().try_fold(Rational64::zero(), |acc, w| {
            CheckedAdd::checked_add(&acc, w)
        });
        if total != Some(Rational64::one()) {
            return Err(Error::Malformed("atom weights must sum to 1".into()));
        }
        Ok(EmpiricalMeasure { atoms: map })
    }

    pub fn point_mass(p: BoundaryPoint) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(p, Rational64::one());
        EmpiricalMeasure { atoms }
    }

    pub fn uniform(points: impl IntoIterator<Item = BoundaryPoint>) -> Result<Self> {
        let points: Vec<BoundaryPoint> = points.into_iter().collect();
        let w = Rational64::new(1, points.len().max(1) as i64);
        EmpiricalMeasure::new(points.into_iter().map(|p| (p, w)))
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&BoundaryPoint, &Rational64)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.atoms.keys().next().map_or(0, |p| p.rank())
    }

    /// The image measure `g·λ`.
    pub fn push_forward(&self, g: &ReducedWord) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|(p, w)| Ok((left_translate(g, p)?, *w)))
            .collect::<Result<Vec<_>>>()?;
        EmpiricalMeasure::new(atoms)
    }

    /// Mass of the closed ball `{p : ρ(p, center) ≤ ε}`.
    pub fn ball_mass(&self, center: &BoundaryPoint, eps: Rational64) -> Result<Rational64> {
        let c = Point::Boundary(center.clone());
        let mut mass = Rational64::zero();
        for (p, w) in &self.atoms {
            if within(&Point::Boundary(p.clone()), &c, eps)? {
                mass += *w;
            }
        }
        Ok(mass)
    }
}

// ρ(p, c) = 1/((p|c)+1) ≤ ε
fn within(p: &Point, c: &Point, eps: Rational64) -> Result<bool> {
    Ok(match gromov(p, c)? {
        GromovValue::Infinite => true,
        GromovValue::Finite(g) => eps * Rational64::from_integer(g as i64 + 1) >= Rational64::one(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionWitness {
    pub element: ReducedWord,
    pub center: BoundaryPoint,
    pub epsilon: Rational64,
    /// `g·λ(B_ε(center))`.
    pub mass: Rational64,
}

impl ContractionWitness {
    /// Recomputes the ball mass of `g·λ` from scratch.
    pub fn verify(&self, lambda: &EmpiricalMeasure) -> Result<bool> {
        let pushed = lambda.push_forward(&self.element)?;
        Ok(pushed.ball_mass(&self.center, self.epsilon)? >= Rational64::one() - self.epsilon)
    }
}

fn check_eps(eps: Rational64) -> Result<()> {
    if eps <= Rational64::zero() || eps > Rational64::one() {
        return Err(Error::Precondition(format!("ε = {eps} outside (0, 1]")));
    }
    Ok(())
}

/// Looks for an `ε`-ball holding at least `1 − ε` of `g·λ`.
///
/// Only balls centred at atoms of `g·λ` are tried. Any ball meeting the
/// support equals the ball of the same radius around one of its atoms.
pub fn is_eps_contracting(
    g: &ReducedWord,
    lambda: &EmpiricalMeasure,
    eps: Rational64,
) -> Result<Option<ContractionWitness>> {
    check_eps(eps)?;
    let pushed = lambda.push_forward(g)?;
    let need = Rational64::one() - eps;
    let mut best: Option<ContractionWitness> = None;
    for (center, _) in pushed.atoms() {
        let mass = pushed.ball_mass(center, eps)?;
        if mass >= need && best.as_ref().is_none_or(|b| mass > b.mass) {
            best = Some(ContractionWitness {
                element: g.clone(),
                center: center.clone(),
                epsilon: eps,
                mass,
            });
        }
    }
    Ok(best)
}

/// Checks `a·B_{1/k}(a^{−∞}) ∪ B_{1/k}(a^{+∞})` covers the boundary, cylinder by cylinder.
pub fn ball_cover_check(a: &ReducedWord, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if a.len() < 2 * k {
        return Err(Error::Precondition(format!(
            "|a| = {} < 2k = {}",
            a.len(),
            2 * k
        )));
    }
    covers(a, k)
}

fn covers(a: &ReducedWord, k: usize) -> Result<bool> {
    let r = k - 1;
    let plus = pow_infinity(a, true)?.prefix(r).into_letters();
    let minus = pow_infinity(a, false)?.prefix(r).into_letters();
    let cover = Cover {
        a: a.letters(),
        a_inv: a.invert().into_letters(),
        rank: a.rank(),
        r,
        plus,
        minus,
        depth: a.len() + k + 1,
    };
    let mut w = Vec::new();
    cover.walk(&mut w)
}

struct Cover<'a> {
    a: &'a [Letter],
    a_inv: Vec<Letter>,
    rank: u32,
    r: usize,
    plus: Vec<Letter>,
    minus: Vec<Letter>,
    depth: usize,
}

impl Cover<'_> {
    /// `Some(true)` if every point of the cylinder `w` is covered, `Some(false)`
    /// if none is, `None` if the cylinder is too coarse to tell.
    fn decide(&self, w: &[Letter]) -> Option<bool> {
        let plus_known = w.len() >= self.r;
        if plus_known && w[..self.r] == self.plus[..] {
            return Some(true);
        }
        // a⁻¹·C_w = C_v once the cancellation stops inside w
        let c = self.a.iter().zip(w).take_while(|(x, y)| x == y).count();
        let mut minus_known = false;
        if c < w.len() {
            let m = self.a.len();
            let v_len = (m - c) + (w.len() - c);
            if v_len >= self.r {
                minus_known = true;
                let v = self.a_inv[..m - c].iter().chain(&w[c..]);
                if v.take(self.r).eq(self.minus.iter()) {
                    return Some(true);
                }
            }
        }
        (plus_known && minus_known).then_some(false)
    }

    fn walk(&self, w: &mut Vec<Letter>) -> Result<bool> {
        if let Some(v) = self.decide(w) {
            return Ok(v);
        }
        // past |a|, c < |w| and |v| ≥ |w| − |a| ≥ k + 1
        if w.len() >= self.depth {
            return Err(Error::Internal("cylinder undecided at full depth".into()));
        }
        for g in 1..=self.rank {
            for l in [Letter::pos(g), Letter::neg(g)] {
                if w.last().is_some_and(|&p| p.cancels(l)) {
                    continue;
                }
                w.push(l);
                let ok = self.walk(w)?;
                w.pop();
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn check_noncommuting(a: &ReducedWord, b: &ReducedWord) -> Result<()> {
    if a.commutes_with(b)? {
        return Err(Error::Precondition("a and b commute".into()));
    }
    Ok(())
}

/// The candidate with wing ≥ k and its length in letters of `{a, b}^{±1}`.
fn large_wing_candidate(
    a: &ReducedWord,
    b: &ReducedWord,
    k: usize,
) -> Result<(ReducedWord, usize)> {
    check_noncommuting(a, b)?;
    let p = 20 * k as i64;
    let candidates = [
        (a.clone(), 1),
        (b.clone(), 1),
        (a.power(p).conjugate(b)?, 2 * p as usize + 1),
        (b.power(p).conjugate(a)?, 2 * p as usize + 1),
    ];
    candidates
        .into_iter()
        .find(|(w, _)| w.wing_len() >= k)
        .ok_or_else(|| Error::Internal(format!("no candidate with wing ≥ {k}")))
}

/// First of `a, b, a^{20k} b a^{−20k}, b^{20k} a b^{−20k}` with wing length ≥ k.
pub fn find_large_wing(a: &ReducedWord, b: &ReducedWord, k: usize) -> Result<ReducedWord> {
    large_wing_candidate(a, b, k).map(|(w, _)| w)
}

/// `{a, a², …, a^k}`.
pub fn contracting_family(a: &ReducedWord, k: usize) -> Result<Vec<ReducedWord>> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let wing = a.wing_len();
    if wing < k {
        return Err(Error::Precondition(format!("wing length {wing} < k = {k}")));
    }
    Ok((1..=k as i64).map(|j| a.power(j)).collect())
}

#[derive(Clone, Debug)]
pub struct QWitness {
    pub witness: ContractionWitness,
    /// The element is `h^power` with `h` from [`find_large_wing`].
    pub power: usize,
    /// Length of the element as a product of letters of `{a, b}^{±1}`.
    pub q_letters: usize,
}

/// A `1/k`-contracting element for `λ` among the products of at most
/// `50k²` letters of `{a, b}^{±1}`, found as a power of a large-wing element.
pub fn q_collection_witness(
    a: &ReducedWord,
    b: &ReducedWord,
    k: usize,
    lambda: &EmpiricalMeasure,
) -> Result<QWitness> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let (h, q_len) = large_wing_candidate(a, b, k)?;
    let eps = Rational64::new(1, k as i64);
    for (j, g) in contracting_family(&h, k)?.into_iter().enumerate() {
        if let Some(witness) = is_eps_contracting(&g, lambda, eps)? {
            return Ok(QWitness {
                witness,
                power: j + 1,
                q_letters: (j + 1) * q_len,
            });
        }
    }
    Err(Error::Internal(format!(
        "no power of the large-wing element is 1/{k}-contracting"
    )))
}

/// A group element for [`min_convolution_hit`].
#[derive(Clone, Debug)]
pub enum GroupElement {
    Free(ReducedWord),
    Braid(BraidWord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionHit {
    pub steps: usize,
    /// `μ_s(g)`.
    pub mass: BigRational,
    /// `1/μ_s(g)`.
    pub c_prime: BigRational,
    /// `1/(1 + C′)`.
    pub c_double_prime: BigRational,
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Smallest `s` in `1..=s_max` with `μ_s(g) > 0`.
///
/// Braids are compared through their Artin images, free words letter by letter.
pub fn min_convolution_hit(
    mu: &GeneratorDistribution,
    target: &GroupElement,
    s_max: usize,
) -> Result<Option<ConvolutionHit>> {
    let (start, goal) = match target {
        GroupElement::Free(w) => (vec![ReducedWord::identity(w.rank())], vec![w.clone()]),
        GroupElement::Braid(b) => {
            let id = BraidWord::identity(b.n());
            (
                crate::artin::braid_images(&id),
                crate::artin::braid_images(b),
            )
        }
    };
    let steps = mu
        .atoms()
        .iter()
        .map(|&(l, w)| Ok((step_letters(l, target)?, big(w))))
        .collect::<Result<Vec<_>>>()?;
    let mut layer: HashMap<Vec<ReducedWord>, BigRational> = HashMap::new();
    layer.insert(start, BigRational::one());
    for s in 1..=s_max {
        let mut next: HashMap<Vec<ReducedWord>, BigRational> =
            HashMap::with_capacity(layer.len() * steps.len());
        for (key, mass) in &layer {
            for (letters, w) in &steps {
                let mut k = key.clone();
                match target {
                    GroupElement::Free(_) => letters.iter().for_each(|&l| k[0].push(l)),
                    GroupElement::Braid(_) => letters.iter().for_each(|&l| push_sigma(&mut k, l)),
                }
                *next.entry(k).or_insert_with(BigRational::zero) += mass * w;
            }
        }
        if let Some(mass) = next.get(&goal) {
            let c_prime = mass.recip();
            let c_double_prime = (BigRational::one() + &c_prime).recip();
            return Ok(Some(ConvolutionHit {
                steps: s,
                mass: mass.clone(),
                c_prime,
                c_double_prime,
            }));
        }
        layer = next;
    }
    Ok(None)
}

/// The letters one atom contributes, as free letters or σ letters.
fn step_letters(l: WalkLetter, target: &GroupElement) -> Result<Vec<Letter>> {
    let mismatch = || Error::Precondition(format!("atom {l} does not live in the target's group"));
    match (l, target) {
        (WalkLetter::Free(_, x), GroupElement::Free(w)) if x.gen() <= w.rank() => Ok(vec![x]),
        (WalkLetter::Sigma(x), GroupElement::Braid(b)) if x.gen() < b.n() => Ok(vec![x]),
        (WalkLetter::Pure(p), GroupElement::Braid(b)) if p.gen.j <= b.n() => Ok(p.expand()),
        _ => Err(mismatch()),
    }
}

/// `head · (period)^inf` over the given alphabet.
pub fn format_point(p: &BoundaryPoint, alphabet: &str) -> String {
    let period = format_free(p.period().letters(), alphabet);
    if p.head().is_empty() {
        format!("({period})^inf")
    } else {
        format!(
            "{} ({period})^inf",
            format_free(p.head().letters(), alphabet)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walker::DistKind;
    use crate::word::word;

    fn bp(rank: u32, head: &[i32], period: &[i32]) -> BoundaryPoint {
        BoundaryPoint::new(word(rank, head), word(rank, period)).unwrap()
    }

    #[test]
    fn cover_examples() {
        assert!(ball_cover_check(&word(2, &[1, 1]), 1).unwrap());
        assert!(ball_cover_check(&word(2, &[1, 2]), 1).unwrap());
        assert!(ball_cover_check(&word(2, &[1, 2, 1, 2]), 2).unwrap());
        assert!(matches!(
            ball_cover_check(&word(2, &[1]), 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cover_fails_when_radius_too_small() {
        // |a| = 1 < 2k: y2^∞ is in neither ball
        assert!(!covers(&word(2, &[1]), 3).unwrap());
        assert!(covers(&word(2, &[1]), 2).unwrap());
    }

    #[test]
    fn wing_examples() {
        let got = find_large_wing(&word(2, &[1]), &word(2, &[2]), 1).unwrap();
        let mut want: Vec<i32> = vec![1; 20];
        want.push(2);
        want.extend(vec![-1; 20]);
        assert_eq!(got, word(2, &want));
        assert_eq!(got.wing_len(), 20);
        let a = word(2, &[1, 2, -1]);
        assert_eq!(find_large_wing(&a, &word(2, &[2]), 1).unwrap(), a);
        assert!(find_large_wing(&word(2, &[1]), &word(2, &[1, 1]), 1).is_err());
    }

    #[test]
    fn family_examples() {
        let a = word(2, &[1, 2, -1]);
        assert_eq!(contracting_family(&a, 1).unwrap(), vec![a.clone()]);
        assert!(contracting_family(&a, 2).is_err());
        let b = word(2, &[1, 1, 2, -1, -1]);
        assert_eq!(
            contracting_family(&b, 2).unwrap(),
            vec![b.clone(), word(2, &[1, 1, 2, 2, -1, -1])]
        );
    }

    #[test]
    fn eps_examples() {
        let w = bp(2, &[1], &[2]);
        let id = ReducedWord::identity(2);
        let half = Rational64::new(1, 2);
        let wit = is_eps_contracting(&id, &EmpiricalMeasure::point_mass(w.clone()), half)
            .unwrap()
            .unwrap();
        assert_eq!(wit.center, w);

        // (y1^∞ | y2^∞) = 0, so ρ = 1
        let lam = EmpiricalMeasure::uniform([bp(2, &[], &[1]), bp(2, &[], &[2])]).unwrap();
        assert!(is_eps_contracting(&id, &lam, Rational64::new(1, 3))
            .unwrap()
            .is_none());
        assert!(is_eps_contracting(&id, &lam, Rational64::new(0, 1)).is_err());
        assert!(is_eps_contracting(&id, &lam, Rational64::one())
            .unwrap()
            .is_some());
    }

    #[test]
    fn family_member_contracts() {
        let lam = EmpiricalMeasure::uniform([
            bp(2, &[], &[1]),
            bp(2, &[], &[-1]),
            bp(2, &[], &[2]),
            bp(2, &[2, 1], &[-2]),
        ])
        .unwrap();
        let a = word(2, &[1, 1, 2, -1, -1]);
        let eps = Rational64::new(1, 2);
        let hit = contracting_family(&a, 2)
            .unwrap()
            .iter()
            .find_map(|g| is_eps_contracting(g, &lam, eps).unwrap());
        assert!(hit.unwrap().verify(&lam).unwrap());
    }

    #[test]
    fn q_witness_example() {
        let lam = EmpiricalMeasure::uniform([bp(2, &[], &[1]), bp(2, &[], &[-2])]).unwrap();
        let q = q_collection_witness(&word(2, &[1]), &word(2, &[2]), 1, &lam).unwrap();
        assert!(q.q_letters <= 50);
        assert!(q.witness.verify(&lam).unwrap());
        let pm = EmpiricalMeasure::point_mass(bp(2, &[], &[1]));
        let q = q_collection_witness(&word(2, &[1]), &word(2, &[2]), 3, &pm).unwrap();
        assert_eq!(q.power, 1);
        assert!(q_collection_witness(&word(2, &[1]), &word(2, &[-1]), 1, &pm).is_err());
    }

    #[test]
    fn measure_validation() {
        let p = bp(2, &[], &[1]);
        assert!(EmpiricalMeasure::new([(p.clone(), Rational64::new(1, 2))]).is_err());
        assert!(EmpiricalMeasure::new([
            (p.clone(), Rational64::new(-1, 2)),
            (p.clone(), Rational64::new(3, 2))
        ])
        .is_err());
        let merged = EmpiricalMeasure::new([
            (p.clone(), Rational64::new(1, 2)),
            (bp(2, &[1], &[1, 1]), Rational64::new(1, 2)),
        ]);
        assert_eq!(merged.unwrap().len(), 1);
    }

    fn sigma1_uniform() -> GeneratorDistribution {
        let h = Rational64::new(1, 2);
        GeneratorDistribution::new(
            DistKind::Custom,
            vec![
                (WalkLetter::Sigma(Letter::pos(1)), h),
                (WalkLetter::Sigma(Letter::neg(1)), h),
            ],
            true,
        )
        .unwrap()
    }

    #[test]
    fn convolution_examples() {
        let mu = sigma1_uniform();
        let sq = GroupElement::Braid(BraidWord::parse("b1^2", 2).unwrap());
        let hit = min_convolution_hit(&mu, &sq, 5).unwrap().unwrap();
        assert_eq!(hit.steps, 2);
        assert_eq!(hit.mass, BigRational::new(1.into(), 4.into()));
        assert_eq!(hit.c_prime, BigRational::from_integer(4.into()));
        assert_eq!(hit.c_double_prime, BigRational::new(1.into(), 5.into()));
        let id = GroupElement::Braid(BraidWord::identity(2));
        let hit = min_convolution_hit(&mu, &id, 5).unwrap().unwrap();
        assert_eq!(
            (hit.steps, hit.c_prime),
            (2, BigRational::from_integer(2.into()))
        );
        let far = GroupElement::Braid(BraidWord::parse("b1^4", 2).unwrap());
        assert!(min_convolution_hit(&mu, &far, 3).unwrap().is_none());
        assert!(min_convolution_hit(&mu, &GroupElement::Free(word(2, &[1])), 3).is_err());
    }
}
