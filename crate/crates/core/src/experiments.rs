//! Walk experiments: stabilization of the normal form, convergence of the
//! top part, selective convergence of conjugates of the central element and
//! convergence of Artin words.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path as FsPath;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artin::{a_word_from_image, push_sigma, SignPolicy};
use crate::braid::{BraidWord, PureWord};
use crate::comb::{central_y_word, mi_braid_with_guard, mi_pure_with_guard, FlatToken, MIForm};
use crate::error::{Error, Result};
use crate::walker::{sample_paths, Path, WalkConfig, WalkLetter};
use crate::word::{Letter, ReducedWord};

/// Which optional series to compute.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentOptions {
    #[serde(default)]
    pub theorem2: bool,
    #[serde(default)]
    pub selective: bool,
    /// Index `i` for the `A_i` series.
    #[serde(default)]
    pub artin_i: Option<u32>,
    /// `(p, q)` for the occurrence ratio of `A_i`.
    #[serde(default)]
    pub ratio: Option<(u32, u32)>,
    #[serde(default)]
    pub sign_policy: SignPolicy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub path_id: usize,
    pub step: usize,
    /// Flattened token count, separators included.
    pub mi_len: usize,
    /// Common prefix with the flattened form at the last step.
    pub lcp_final: usize,
    /// `|V_1|, …, |V_{n−1}|`.
    pub part_lens: Vec<usize>,
    pub x_gromov: Option<u64>,
    pub x_len: Option<usize>,
    pub x_wing: Option<usize>,
    /// Whether the conjugate inequality held for both signs.
    pub t2_holds: Option<bool>,
    pub sel_gromov: Option<u64>,
    pub sel_delta: Option<i8>,
    pub a_lcp: Option<usize>,
    pub a_len: Option<usize>,
    pub a_ratio: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub path_id: usize,
    pub step: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSummary {
    pub step: usize,
    pub paths: usize,
    pub median_mi_len: f64,
    pub median_lcp_final: f64,
    pub median_x_gromov: Option<f64>,
    pub median_sel_gromov: Option<f64>,
    pub median_a_lcp: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n: u32,
    pub config: Option<WalkConfig>,
    pub options: ExperimentOptions,
    pub checkpoints: Vec<usize>,
    pub records: Vec<Record>,
    pub failures: Vec<Failure>,
    pub summary: Vec<CheckpointSummary>,
}

impl Report {
    /// Records of one path, in checkpoint order.
    pub fn path_records(&self, path_id: usize) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.path_id == path_id)
    }

    pub fn summary_at(&self, step: usize) -> Option<&CheckpointSummary> {
        self.summary.iter().find(|s| s.step == step)
    }
}

#[derive(Clone)]
struct Snapshot {
    step: usize,
    tokens: Vec<FlatToken>,
    part_lens: Vec<usize>,
    x: ReducedWord,
    a: Option<ReducedWord>,
}

struct PathRun {
    snapshots: Vec<Snapshot>,
    last: Snapshot,
}

fn snapshot(form: &MIForm, step: usize, artin: Option<(&[ReducedWord], u32)>) -> Result<Snapshot> {
    let a = match artin {
        Some((images, i)) => Some(a_word_from_image(&images[(i - 1) as usize], i)?),
        None => None,
    };
    Ok(Snapshot {
        step,
        tokens: form.tokens(),
        part_lens: form.parts().iter().rev().map(ReducedWord::len).collect(),
        x: form.parts()[0].clone(),
        a,
    })
}

/// Every checkpoint is combed afresh from the left; only the Artin images are
/// carried along the path.
fn walk_path(
    n: u32,
    guard: usize,
    path: &Path,
    checkpoints: &[usize],
    artin_i: Option<u32>,
) -> std::result::Result<PathRun, Failure> {
    let fail = |step: usize, e: Error| Failure {
        path_id: path.index,
        step,
        error: e.to_string(),
    };
    let mut images: Option<Vec<ReducedWord>> = artin_i.map(|_| {
        (1..=n)
            .map(|k| ReducedWord::from_reduced(n, vec![Letter::pos(k)]))
            .collect()
    });
    let mut pure = PureWord::identity(n);
    let mut braid = BraidWord::identity(n);
    let mut is_pure = true;
    let steps = path.letters.len();
    let mut snapshots = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    let mut last = None;
    for (k, &letter) in path.letters.iter().enumerate() {
        let step = k + 1;
        let sigmas: Vec<Letter> = match letter {
            WalkLetter::Pure(l) => {
                pure.push(l);
                l.expand()
            }
            WalkLetter::Sigma(l) => {
                is_pure = false;
                vec![l]
            }
            WalkLetter::Free(..) => {
                return Err(fail(
                    step,
                    Error::Malformed("free letters cannot drive a braid walk".into()),
                ))
            }
        };
        for &l in &sigmas {
            braid.push(l);
        }
        if let Some(images) = images.as_mut() {
            for l in sigmas {
                push_sigma(images, l);
            }
            let size: usize = images.iter().map(ReducedWord::len).sum();
            if size > guard {
                return Err(fail(
                    step,
                    Error::LengthGuard {
                        limit: guard,
                        reached: size,
                    },
                ));
            }
        }
        let at_checkpoint = next.peek() == Some(&&step);
        if at_checkpoint || step == steps {
            let form = if is_pure {
                mi_pure_with_guard(&pure, guard)
            } else {
                mi_braid_with_guard(&braid, guard)
            };
            let snap = form
                .and_then(|f| snapshot(&f, step, images.as_deref().zip(artin_i)))
                .map_err(|e| fail(step, e))?;
            if step == steps {
                last = Some(snap);
            } else {
                next.next();
                snapshots.push(snap);
            }
        }
    }
    let last = match last {
        Some(s) => s,
        None => snapshot(&MIForm::identity(n), 0, images.as_deref().zip(artin_i))
            .map_err(|e| fail(0, e))?,
    };
    if next.peek() == Some(&&steps) {
        snapshots.push(last.clone());
    }
    Ok(PathRun { snapshots, last })
}

fn lcp<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn conjugate(x: &ReducedWord, u: &ReducedWord) -> ReducedWord {
    let mut w = x.clone();
    w.push_reduced(u.letters());
    w.push_inverse_of(x.letters());
    w
}

fn records_for(
    run: &PathRun,
    path_id: usize,
    opts: &ExperimentOptions,
    u: Option<&ReducedWord>,
) -> Vec<Record> {
    let last = &run.last;
    let refs = u.map(|u| {
        let ui = u.invert();
        [conjugate(&last.x, u), conjugate(&last.x, &ui)]
    });
    run.snapshots
        .iter()
        .map(|s| {
            let mut r = Record {
                path_id,
                step: s.step,
                mi_len: s.tokens.len(),
                lcp_final: lcp(&s.tokens, &last.tokens),
                part_lens: s.part_lens.clone(),
                x_gromov: Some(s.x.lcp(&last.x) as u64),
                x_len: None,
                x_wing: None,
                t2_holds: None,
                sel_gromov: None,
                sel_delta: None,
                a_lcp: None,
                a_len: None,
                a_ratio: None,
            };
            if opts.theorem2 {
                r.x_len = Some(s.x.len());
                r.x_wing = Some(s.x.wing_len());
            }
            if let (Some(u), Some(refs)) = (u, refs.as_ref()) {
                let ui = u.invert();
                let pair = [(1i8, conjugate(&s.x, u)), (-1i8, conjugate(&s.x, &ui))];
                if opts.theorem2 {
                    let holds = pair
                        .iter()
                        .all(|(_, c)| 2 * s.x.lcp(c) + u.len() >= c.len());
                    r.t2_holds = Some(holds);
                }
                if opts.selective {
                    let (delta, g) = pair
                        .iter()
                        .flat_map(|(d, c)| refs.iter().map(move |rf| (*d, c.lcp(rf) as u64)))
                        .max_by_key(|&(d, g)| (g, d))
                        .expect("nonempty");
                    r.sel_gromov = Some(g);
                    r.sel_delta = Some(delta);
                }
            }
            if let (Some(a), Some(af)) = (&s.a, &last.a) {
                r.a_lcp = Some(a.invert().lcp(&af.invert()));
                r.a_len = Some(a.len());
                if let Some((p, q)) = opts.ratio {
                    r.a_ratio = Some(match opts.sign_policy.ratio(a, p, q) {
                        Some(v) => v.to_string(),
                        None => "undefined".into(),
                    });
                }
            }
            r
        })
        .collect()
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    })
}

fn summarize(records: &[Record], checkpoints: &[usize]) -> Vec<CheckpointSummary> {
    checkpoints
        .iter()
        .map(|&step| {
            let at: Vec<&Record> = records.iter().filter(|r| r.step == step).collect();
            let col = |f: &dyn Fn(&Record) -> Option<f64>| {
                median(at.iter().filter_map(|r| f(r)).collect())
            };
            CheckpointSummary {
                step,
                paths: at.len(),
                median_mi_len: col(&|r| Some(r.mi_len as f64)).unwrap_or(0.0),
                median_lcp_final: col(&|r| Some(r.lcp_final as f64)).unwrap_or(0.0),
                median_x_gromov: col(&|r| r.x_gromov.map(|v| v as f64)),
                median_sel_gromov: col(&|r| r.sel_gromov.map(|v| v as f64)),
                median_a_lcp: col(&|r| r.a_lcp.map(|v| v as f64)),
            }
        })
        .collect()
}

/// Runs the experiment on explicit paths of a common length.
pub fn run_paths(
    n: u32,
    guard: usize,
    paths: &[Path],
    checkpoints: &[usize],
    opts: &ExperimentOptions,
) -> Result<Report> {
    if n < 2 {
        return Err(Error::Malformed("walk experiments need n ≥ 2".into()));
    }
    if let Some(i) = opts.artin_i {
        if i == 0 || i > n {
            return Err(Error::Malformed(format!("x{i} out of range for n = {n}")));
        }
        if paths
            .iter()
            .flat_map(|p| &p.letters)
            .any(|l| !matches!(l, WalkLetter::Pure(_)))
        {
            return Err(Error::Precondition(
                "the A_i series needs pure-braid paths".into(),
            ));
        }
    }
    if let Some((p, q)) = opts.ratio {
        if p == 0 || q == 0 || p > n || q > n {
            return Err(Error::Malformed("occurrence indices out of range".into()));
        }
    }
    let u = if (opts.selective || opts.theorem2) && n >= 3 {
        Some(central_y_word(n)?)
    } else {
        None
    };
    let outcomes: Vec<_> = paths
        .par_iter()
        .map(|p| {
            walk_path(n, guard, p, checkpoints, opts.artin_i)
                .map(|run| records_for(&run, p.index, opts, u.as_ref()))
        })
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => records.extend(r),
            Err(f) => failures.push(f),
        }
    }
    let summary = summarize(&records, checkpoints);
    Ok(Report {
        n,
        config: None,
        options: opts.clone(),
        checkpoints: checkpoints.to_vec(),
        records,
        failures,
        summary,
    })
}

pub fn run(config: &WalkConfig, opts: &ExperimentOptions) -> Result<Report> {
    let paths = sample_paths(config)?;
    let cps = config.checkpoint_list();
    let mut report = run_paths(config.n, config.length_guard, &paths, &cps, opts)?;
    report.config = Some(config.clone());
    Ok(report)
}

pub fn stabilization_run(config: &WalkConfig) -> Result<Report> {
    run(config, &ExperimentOptions::default())
}

pub fn theorem2_run(config: &WalkConfig) -> Result<Report> {
    run(
        config,
        &ExperimentOptions {
            theorem2: true,
            ..Default::default()
        },
    )
}

pub fn selective_run(config: &WalkConfig) -> Result<Report> {
    run(
        config,
        &ExperimentOptions {
            selective: true,
            theorem2: true,
            ..Default::default()
        },
    )
}

pub fn artin_convergence_run(config: &WalkConfig, i: u32) -> Result<Report> {
    run(
        config,
        &ExperimentOptions {
            artin_i: Some(i),
            ..Default::default()
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn write_csv<W: Write>(report: &Report, out: W) -> Result<()> {
    let serde_err = |e: csv::Error| Error::Serde(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["path_id", "step", "mi_len", "lcp_final"]
        .map(String::from)
        .to_vec();
    header.extend((1..report.n).map(|m| format!("part_len_{m}")));
    header.extend(["x_gromov", "sel_gromov", "a_lcp"].map(String::from));
    w.write_record(&header).map_err(serde_err)?;
    for r in &report.records {
        let mut row = vec![
            r.path_id.to_string(),
            r.step.to_string(),
            r.mi_len.to_string(),
            r.lcp_final.to_string(),
        ];
        row.extend(r.part_lens.iter().map(ToString::to_string));
        row.extend([opt(&r.x_gromov), opt(&r.sel_gromov), opt(&r.a_lcp)]);
        w.write_record(&row).map_err(serde_err)?;
    }
    w.flush().map_err(|e| Error::Serde(e.to_string()))
}

pub fn write_json<W: Write>(report: &Report, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, report).map_err(|e| Error::Serde(e.to_string()))
}

pub fn read_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))
}

/// Writes to `dest`, or stdout when `None`.
pub fn emit(report: &Report, format: Format, dest: Option<&FsPath>) -> Result<()> {
    let io_err = |path: &FsPath| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    match dest {
        Some(path) => {
            let file = File::create(path).map_err(io_err(path))?;
            let mut out = BufWriter::new(file);
            match format {
                Format::Csv => write_csv(report, &mut out)?,
                Format::Json => write_json(report, &mut out)?,
            }
            out.flush().map_err(io_err(path))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match format {
                Format::Csv => write_csv(report, &mut lock),
                Format::Json => {
                    write_json(report, &mut lock)?;
                    writeln!(lock).map_err(io_err(FsPath::new("<stdout>")))
                }
            }
        }
    }
}
