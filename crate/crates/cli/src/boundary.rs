use braidcomb::braid::BraidWord;
use braidcomb::lab::{
    ball_cover_check, find_large_wing, format_point, is_eps_contracting, min_convolution_hit,
    q_collection_witness, ContractionWitness, EmpiricalMeasure, GroupElement,
};
use braidcomb::point::BoundaryPoint;
use braidcomb::text::{format_free, parse_free};
use braidcomb::walker::{AtomSpec, DistKind, DistributionSpec, WalkLetter};
use braidcomb::word::ReducedWord;
use braidcomb::Error;
use clap::Subcommand;
use num_rational::Rational64;
use serde_json::{json, Value};

use crate::{read_file, Failure};

#[derive(Subcommand)]
pub enum BoundaryCommand {
    /// Check that the two cylinder balls around a^{±∞} cover the boundary.
    Cover {
        #[arg(long)]
        a: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        rank: u32,
    },
    /// Find an element with wing length at least k from a non-commuting pair.
    Wing {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        rank: u32,
    },
    /// Test whether g is ε-contracting for a finite measure.
    Contract {
        #[arg(long)]
        g: String,
        #[arg(long)]
        eps: String,
        /// `HEAD (PERIOD)^inf`, optionally followed by `@WEIGHT`; repeatable.
        #[arg(long = "point", required = true)]
        points: Vec<String>,
        #[arg(long, default_value_t = 2)]
        rank: u32,
    },
    /// Find a 1/k-contracting element among short products of a, b.
    Q {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        k: usize,
        #[arg(long = "point", required = true)]
        points: Vec<String>,
        #[arg(long, default_value_t = 2)]
        rank: u32,
    },
    /// First convolution power of a step distribution that reaches a target.
    Hit {
        /// `uniform-s`, `uniform-sigma`, inline `TOKEN:WEIGHT,…`, or a JSON file.
        #[arg(long)]
        dist: String,
        #[arg(long)]
        target: String,
        /// Strands for braid targets, rank for free ones.
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 8)]
        s_max: usize,
    },
}

fn free(text: &str, rank: u32) -> Result<ReducedWord, Error> {
    parse_free(text, rank)
}

fn show(w: &ReducedWord) -> String {
    format_free(w.letters(), "y")
}

fn parse_rational(text: &str) -> Result<Rational64, Error> {
    text.trim()
        .parse()
        .map_err(|_| Error::Malformed(format!("bad rational {text:?}")))
}

/// `HEAD (PERIOD)^inf[@WEIGHT]`.
fn parse_point(text: &str, rank: u32) -> Result<(BoundaryPoint, Option<Rational64>), Error> {
    let (body, weight) = match text.rsplit_once('@') {
        Some((b, w)) => (b, Some(parse_rational(w)?)),
        None => (text, None),
    };
    let bad = || Error::Malformed(format!("expected `HEAD (PERIOD)^inf`, got {body:?}"));
    let open = body.find('(').ok_or_else(bad)?;
    let close = body.rfind(")^inf").ok_or_else(bad)?;
    if close < open || !body[close + 5..].trim().is_empty() {
        return Err(bad());
    }
    let head = free(&body[..open], rank)?;
    let period = free(&body[open + 1..close], rank)?;
    Ok((BoundaryPoint::new(head, period)?, weight))
}

fn measure(points: &[String], rank: u32) -> Result<EmpiricalMeasure, Error> {
    let parsed = points
        .iter()
        .map(|p| parse_point(p, rank))
        .collect::<Result<Vec<_>, _>>()?;
    if parsed.iter().all(|(_, w)| w.is_none()) {
        return EmpiricalMeasure::uniform(parsed.into_iter().map(|(p, _)| p));
    }
    let atoms = parsed
        .into_iter()
        .map(|(p, w)| {
            w.map(|w| (p, w))
                .ok_or_else(|| Error::Malformed("give a weight for every point or none".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    EmpiricalMeasure::new(atoms)
}

fn measure_json(m: &EmpiricalMeasure) -> Value {
    m.atoms()
        .map(|(p, w)| json!({ "point": format_point(p, "y"), "weight": w.to_string() }))
        .collect()
}

fn witness_json(w: &ContractionWitness) -> Value {
    json!({
        "element": show(&w.element),
        "center": format_point(&w.center, "y"),
        "epsilon": w.epsilon.to_string(),
        "mass": w.mass.to_string(),
    })
}

fn distribution(text: &str) -> Result<DistributionSpec, Error> {
    Ok(match text {
        "uniform-s" => DistributionSpec::canned(DistKind::UniformS),
        "uniform-sigma" => DistributionSpec::canned(DistKind::UniformSigma),
        inline if inline.contains(':') => {
            let atoms = inline
                .split(',')
                .map(|a| {
                    let (token, weight) = a.rsplit_once(':').ok_or_else(|| {
                        Error::Malformed(format!("expected TOKEN:WEIGHT, got {a:?}"))
                    })?;
                    Ok(AtomSpec {
                        token: token.trim().into(),
                        weight: weight.trim().into(),
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            DistributionSpec {
                kind: DistKind::Custom,
                atoms: Some(atoms),
                nondegenerate: None,
            }
        }
        path => serde_json::from_str(&read_file(path.as_ref())?)
            .map_err(|e| Error::Serde(format!("{path}: {e}")))?,
    })
}

pub fn dispatch(cmd: BoundaryCommand) -> Result<(), Failure> {
    let record = match cmd {
        BoundaryCommand::Cover { a, k, rank } => {
            let aw = free(&a, rank)?;
            let verdict = ball_cover_check(&aw, k)?;
            json!({
                "lemma": "ball-cover",
                "inputs": { "a": show(&aw), "k": k, "rank": rank },
                "verdict": verdict,
                "witness": Value::Null,
            })
        }
        BoundaryCommand::Wing { a, b, k, rank } => {
            let (aw, bw) = (free(&a, rank)?, free(&b, rank)?);
            let h = find_large_wing(&aw, &bw, k)?;
            json!({
                "lemma": "large-wing",
                "inputs": { "a": show(&aw), "b": show(&bw), "k": k, "rank": rank },
                "verdict": true,
                "witness": { "element": show(&h), "wing_len": h.wing_len() },
            })
        }
        BoundaryCommand::Contract {
            g,
            eps,
            points,
            rank,
        } => {
            let gw = free(&g, rank)?;
            let eps = parse_rational(&eps)?;
            let lambda = measure(&points, rank)?;
            let found = is_eps_contracting(&gw, &lambda, eps)?;
            json!({
                "lemma": "eps-contracting",
                "inputs": { "g": show(&gw), "eps": eps.to_string(), "measure": measure_json(&lambda) },
                "verdict": found.is_some(),
                "witness": found.as_ref().map_or(Value::Null, witness_json),
            })
        }
        BoundaryCommand::Q {
            a,
            b,
            k,
            points,
            rank,
        } => {
            let (aw, bw) = (free(&a, rank)?, free(&b, rank)?);
            let lambda = measure(&points, rank)?;
            let q = q_collection_witness(&aw, &bw, k, &lambda)?;
            let mut w = witness_json(&q.witness);
            w["power"] = json!(q.power);
            w["q_letters"] = json!(q.q_letters);
            json!({
                "lemma": "q-collection",
                "inputs": { "a": show(&aw), "b": show(&bw), "k": k, "measure": measure_json(&lambda) },
                "verdict": q.witness.verify(&lambda)?,
                "witness": w,
            })
        }
        BoundaryCommand::Hit {
            dist,
            target,
            n,
            s_max,
        } => {
            let mu = distribution(&dist)?.resolve(n)?;
            let free_group = matches!(mu.atoms().first(), Some((WalkLetter::Free(..), _)));
            let goal = if free_group {
                GroupElement::Free(free(&target, n)?)
            } else {
                GroupElement::Braid(BraidWord::parse(&target, n)?)
            };
            let hit = min_convolution_hit(&mu, &goal, s_max)?;
            let atoms: Vec<Value> = mu
                .atoms()
                .iter()
                .map(|(l, w)| json!({ "token": l.to_string(), "weight": w.to_string() }))
                .collect();
            json!({
                "lemma": "convolution-hit",
                "inputs": { "dist": atoms, "target": target, "n": n, "s_max": s_max },
                "verdict": hit.is_some(),
                "witness": hit.map_or(Value::Null, |h| json!({
                    "s": h.steps,
                    "mass": h.mass.to_string(),
                    "c_prime": h.c_prime.to_string(),
                    "c_double_prime": h.c_double_prime.to_string(),
                })),
            })
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&record).map_err(|e| Error::Serde(e.to_string()))?
    );
    Ok(())
}
