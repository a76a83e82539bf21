//! Seeded random walks driven by finitely supported generator distributions.
//!
//! Path `p` draws from its own ChaCha8 stream (`seed`, stream `p`), so the
//! output does not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{CheckedAdd, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{PureGenerator, PureLetter};
use crate::comb::DEFAULT_LENGTH_GUARD;
use crate::error::{Error, Result};
use crate::text::{self, Base};
use crate::word::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WalkLetter {
    Sigma(Letter),
    Pure(PureLetter),
    /// A free-group letter over the `x` or `y` alphabet.
    Free(char, Letter),
}

impl WalkLetter {
    fn alphabet(self) -> char {
        match self {
            WalkLetter::Sigma(_) => 'b',
            WalkLetter::Pure(_) => 's',
            WalkLetter::Free(c, _) => c,
        }
    }

    /// Strands (or rank) needed to hold the letter.
    fn min_n(self) -> u32 {
        match self {
            WalkLetter::Sigma(l) => l.gen() + 1,
            WalkLetter::Pure(l) => l.gen.j,
            WalkLetter::Free(_, l) => l.gen(),
        }
    }
}

impl fmt::Display for WalkLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkLetter::Pure(l) => write!(f, "{l}"),
            WalkLetter::Sigma(l) => f.write_str(&text::format_free(&[*l], "b")),
            WalkLetter::Free(c, l) => f.write_str(&text::format_free(&[*l], &c.to_string())),
        }
    }
}

impl FromStr for WalkLetter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks = text::parse_tokens(s)?;
        let [t] = toks.as_slice() else {
            return Err(Error::parse(
                0,
                format!("expected exactly one letter, found {s:?}"),
            ));
        };
        if t.exp.abs() != 1 {
            return Err(Error::parse(t.pos, "walk letters take exponent ±1 only"));
        }
        let inverse = t.exp < 0;
        Ok(match t.base {
            Base::Sigma(i) => WalkLetter::Sigma(Letter::new(i, inverse)),
            Base::Pure(j, i) => WalkLetter::Pure(PureLetter::new(j, i, inverse)?),
            Base::Free(c, g) => WalkLetter::Free(c, Letter::new(g, inverse)),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistKind {
    UniformS,
    UniformSigma,
    Custom,
}

/// A probability distribution on letters of one alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorDistribution {
    kind: DistKind,
    atoms: Vec<(WalkLetter, Rational64)>,
    nondegenerate: bool,
}

impl GeneratorDistribution {
    pub fn new(
        kind: DistKind,
        atoms: Vec<(WalkLetter, Rational64)>,
        nondegenerate: bool,
    ) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Malformed("distribution has no atoms".into()));
        }
        if atoms.iter().any(|(_, w)| *w <= Rational64::zero()) {
            return Err(Error::Malformed("weights must be positive".into()));
        }
        let total = atoms.iter().try_fold(Rational64::zero(), |acc, (_, w)| {
            CheckedAdd::checked_add(&acc, w)
                .ok_or_else(|| Error::Malformed("weight overflow".into()))
        })?;
        if !total.is_one() {
            return Err(Error::Malformed(format!("weights sum to {total}, not 1")));
        }
        let alpha = atoms[0].0.alphabet();
        if atoms.iter().any(|(l, _)| l.alphabet() != alpha) {
            return Err(Error::Malformed("atoms mix alphabets".into()));
        }
        let mut seen: Vec<_> = atoms.iter().map(|(l, _)| *l).collect();
        seen.sort();
        seen.dedup();
        if seen.len() != atoms.len() {
            return Err(Error::Malformed("repeated atom".into()));
        }
        Ok(GeneratorDistribution {
            kind,
            atoms,
            nondegenerate,
        })
    }

    fn uniform(kind: DistKind, letters: Vec<WalkLetter>) -> Self {
        let w = Rational64::new(1, letters.len() as i64);
        GeneratorDistribution {
            kind,
            atoms: letters.into_iter().map(|l| (l, w)).collect(),
            nondegenerate: true,
        }
    }

    /// Uniform on all s_ji^{±1}.
    pub fn uniform_s(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "uniform-s needs n ≥ 2, got {n}"
            )));
        }
        let letters = PureGenerator::all(n)
            .flat_map(|gen| {
                [false, true].map(|inverse| WalkLetter::Pure(PureLetter { gen, inverse }))
            })
            .collect();
        Ok(Self::uniform(DistKind::UniformS, letters))
    }

    /// Uniform on all σ_i^{±1}.
    pub fn uniform_sigma(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "uniform-sigma needs n ≥ 2, got {n}"
            )));
        }
        let letters = (1..n)
            .flat_map(|i| [false, true].map(|inv| WalkLetter::Sigma(Letter::new(i, inv))))
            .collect();
        Ok(Self::uniform(DistKind::UniformSigma, letters))
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    pub fn atoms(&self) -> &[(WalkLetter, Rational64)] {
        &self.atoms
    }

    /// Canned distributions are nondegenerate; custom ones carry the caller's claim.
    pub fn nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    /// True when every atom is a pure generator.
    pub fn is_pure(&self) -> bool {
        self.atoms
            .iter()
            .all(|(l, _)| matches!(l, WalkLetter::Pure(_)))
    }

    pub fn min_n(&self) -> u32 {
        self.atoms.iter().map(|(l, _)| l.min_n()).max().unwrap_or(1)
    }

    pub fn sampler(&self) -> Result<Sampler> {
        let den = self
            .atoms
            .iter()
            .map(|(_, w)| *w.denom())
            .fold(1i64, |acc, d| acc.lcm(&d));
        let mut cumulative = Vec::with_capacity(self.atoms.len());
        let mut acc = 0i64;
        for (l, w) in &self.atoms {
            let num = w
                .numer()
                .checked_mul(den / w.denom())
                .ok_or_else(|| Error::Malformed("weights too fine to sample exactly".into()))?;
            acc += num;
            cumulative.push((acc, *l));
        }
        debug_assert_eq!(acc, den);
        Ok(Sampler {
            den: den as u64,
            cumulative,
        })
    }

    pub fn to_spec(&self) -> DistributionSpec {
        DistributionSpec {
            kind: self.kind,
            atoms: Some(
                self.atoms
                    .iter()
                    .map(|(l, w)| AtomSpec {
                        token: l.to_string(),
                        weight: w.to_string(),
                    })
                    .collect(),
            ),
            nondegenerate: Some(self.nondegenerate),
        }
    }
}

/// Exact sampling: one uniform integer below the common denominator.
#[derive(Clone, Debug)]
pub struct Sampler {
    den: u64,
    cumulative: Vec<(i64, WalkLetter)>,
}

impl Sampler {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> WalkLetter {
        let u = rng.gen_range(0..self.den) as i64;
        let k = self.cumulative.partition_point(|(c, _)| *c <= u);
        self.cumulative[k].1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub token: String,
    /// Exact rational such as `"1/12"`.
    pub weight: String,
}

/// Serialized form of a distribution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub kind: DistKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<AtomSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nondegenerate: Option<bool>,
}

impl DistributionSpec {
    pub fn canned(kind: DistKind) -> Self {
        DistributionSpec {
            kind,
            atoms: None,
            nondegenerate: None,
        }
    }

    pub fn resolve(&self, n: u32) -> Result<GeneratorDistribution> {
        let canned = match self.kind {
            DistKind::UniformS => Some(GeneratorDistribution::uniform_s(n)?),
            DistKind::UniformSigma => Some(GeneratorDistribution::uniform_sigma(n)?),
            DistKind::Custom => None,
        };
        let Some(atoms) = &self.atoms else {
            return canned
                .ok_or_else(|| Error::Malformed("custom distribution needs atoms".into()));
        };
        let mut parsed = Vec::with_capacity(atoms.len());
        for a in atoms {
            let l: WalkLetter = a.token.parse()?;
            let w: Rational64 = a
                .weight
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad weight {:?}", a.weight)))?;
            parsed.push((l, w));
        }
        let dist =
            GeneratorDistribution::new(self.kind, parsed, self.nondegenerate.unwrap_or(false))?;
        if let Some(c) = canned {
            if c.atoms.len() != dist.atoms.len() || c.atoms.iter().any(|a| !dist.atoms.contains(a))
            {
                return Err(Error::Malformed(format!(
                    "atoms disagree with {:?}",
                    self.kind
                )));
            }
            return Ok(c);
        }
        if dist.min_n() > n {
            return Err(Error::Malformed(format!("atoms do not fit n = {n}")));
        }
        Ok(dist)
    }
}

fn default_guard() -> usize {
    DEFAULT_LENGTH_GUARD
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub n: u32,
    pub steps: usize,
    pub paths: usize,
    pub seed: u64,
    pub distribution: DistributionSpec,
    /// Sorted steps in `1..=steps`; empty means every step.
    #[serde(default)]
    pub checkpoints: Vec<usize>,
    #[serde(default = "default_guard")]
    pub length_guard: usize,
}

impl WalkConfig {
    pub fn new(
        n: u32,
        steps: usize,
        paths: usize,
        seed: u64,
        distribution: DistributionSpec,
    ) -> Self {
        WalkConfig {
            n,
            steps,
            paths,
            seed,
            distribution,
            checkpoints: Vec::new(),
            length_guard: DEFAULT_LENGTH_GUARD,
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<usize>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn validate(&self) -> Result<GeneratorDistribution> {
        if self.steps == 0 {
            return Err(Error::Malformed("steps must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::Malformed("n must be at least 2".into()));
        }
        let cp = &self.checkpoints;
        if cp.windows(2).any(|w| w[0] >= w[1]) || cp.iter().any(|&t| t == 0 || t > self.steps) {
            return Err(Error::Malformed(format!(
                "checkpoints must be strictly increasing within 1..={}",
                self.steps
            )));
        }
        self.distribution.resolve(self.n)
    }

    /// The effective checkpoint list.
    pub fn checkpoint_list(&self) -> Vec<usize> {
        if self.checkpoints.is_empty() {
            (1..=self.steps).collect()
        } else {
            self.checkpoints.clone()
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serde(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub index: usize,
    pub letters: Vec<WalkLetter>,
}

pub fn sample_path(sampler: &Sampler, seed: u64, index: usize, steps: usize) -> Path {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    Path {
        index,
        letters: (0..steps).map(|_| sampler.sample(&mut rng)).collect(),
    }
}

pub fn sample_paths(config: &WalkConfig) -> Result<Vec<Path>> {
    let dist = config.validate()?;
    let sampler = dist.sampler()?;
    Ok((0..config.paths)
        .into_par_iter()
        .map(|p| sample_path(&sampler, config.seed, p, config.steps))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canned_distributions() {
        let s = GeneratorDistribution::uniform_s(4).unwrap();
        assert_eq!(s.atoms().len(), 12);
        assert!(s.atoms().iter().all(|(_, w)| *w == Rational64::new(1, 12)));
        let g = GeneratorDistribution::uniform_sigma(4).unwrap();
        assert_eq!(g.atoms().len(), 6);
        assert!(g.atoms().iter().all(|(_, w)| *w == Rational64::new(1, 6)));
        let s2 = GeneratorDistribution::uniform_s(2).unwrap();
        let toks: Vec<String> = s2.atoms().iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(toks, ["s2.1", "s2.1^-1"]);
        assert!(GeneratorDistribution::uniform_s(1).is_err());
    }

    #[test]
    fn determinism_and_edge_cases() {
        let cfg = WalkConfig::new(4, 30, 5, 7, DistributionSpec::canned(DistKind::UniformS));
        assert_eq!(sample_paths(&cfg).unwrap(), sample_paths(&cfg).unwrap());
        let cfg0 = WalkConfig {
            paths: 0,
            ..cfg.clone()
        };
        assert!(sample_paths(&cfg0).unwrap().is_empty());
        let single = DistributionSpec {
            kind: DistKind::Custom,
            atoms: Some(vec![AtomSpec {
                token: "s3.1^-1".into(),
                weight: "1".into(),
            }]),
            nondegenerate: None,
        };
        let cfg1 = WalkConfig {
            distribution: single,
            ..cfg
        };
        let p = &sample_paths(&cfg1).unwrap()[0];
        assert!(p.letters.iter().all(|l| l.to_string() == "s3.1^-1"));
    }

    #[test]
    fn config_validation() {
        let cfg = WalkConfig::new(4, 10, 1, 0, DistributionSpec::canned(DistKind::UniformS));
        assert!(cfg.clone().with_checkpoints(vec![3, 2]).validate().is_err());
        assert!(cfg.clone().with_checkpoints(vec![11]).validate().is_err());
        assert!(WalkConfig {
            steps: 0,
            ..cfg.clone()
        }
        .validate()
        .is_err());
        let bad = DistributionSpec {
            kind: DistKind::Custom,
            atoms: Some(vec![
                AtomSpec {
                    token: "s2.1".into(),
                    weight: "1/2".into(),
                },
                AtomSpec {
                    token: "b1".into(),
                    weight: "1/2".into(),
                },
            ]),
            nondegenerate: None,
        };
        assert!(bad.resolve(4).is_err());
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"n":4,"steps":5,"paths":2,"seed":1,
            "distribution":{"kind":"uniform-s","atoms":[{"token":"s2.1","weight":"1/12"}]}}"#;
        let cfg = WalkConfig::from_json(json).unwrap();
        assert!(cfg.validate().is_err());
        let spec = GeneratorDistribution::uniform_sigma(3).unwrap().to_spec();
        let text = serde_json::to_string(&spec).unwrap();
        let back: DistributionSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(
            back.resolve(3).unwrap(),
            GeneratorDistribution::uniform_sigma(3).unwrap()
        );
    }
}
