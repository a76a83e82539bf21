use std::path::PathBuf;
use std::process::ExitCode;

use braidcomb::artin::{a_word, braid_images};
use braidcomb::braid::BraidWord;
use braidcomb::comb::{mi_braid_with_guard, DEFAULT_LENGTH_GUARD};
use braidcomb::experiments::{emit, run, ExperimentOptions, Format};
use braidcomb::golden;
use braidcomb::text::format_free;
use braidcomb::walker::{DistKind, DistributionSpec, WalkConfig};
use braidcomb::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod boundary;

#[derive(Parser)]
#[command(
    name = "braidcomb",
    version,
    about = "Braid combing, boundary checks and random-walk experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the combed normal form of a braid word.
    Mi {
        word: String,
        #[arg(long, default_value_t = 4)]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_LENGTH_GUARD)]
        guard: usize,
    },
    /// Sample random walks and report the stabilization series.
    Walk(WalkArgs),
    /// Print the Artin image of x_i and, for pure braids, A_i.
    Artin {
        word: String,
        #[arg(long)]
        i: u32,
        #[arg(long, default_value_t = 4)]
        n: u32,
    },
    /// Boundary contraction checks, printed as JSON.
    #[command(subcommand)]
    Boundary(boundary::BoundaryCommand),
    /// Run the built-in reference checks.
    VerifyPaper,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct WalkArgs {
    /// JSON walk configuration; overrides the sizing flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    n: u32,
    #[arg(long, default_value_t = 40)]
    steps: usize,
    #[arg(long, default_value_t = 100)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `uniform-s`, `uniform-sigma`, or a JSON distribution file.
    #[arg(long, default_value = "uniform-s")]
    dist: String,
    #[arg(long, value_delimiter = ',')]
    checkpoints: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_LENGTH_GUARD)]
    guard: usize,
    #[arg(long)]
    theorem2: bool,
    #[arg(long)]
    selective: bool,
    #[arg(long)]
    artin_i: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

pub(crate) enum Failure {
    Lib(Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mi { word, n, guard } => mi(&word, n, guard),
        Command::Walk(args) => walk(args),
        Command::Artin { word, i, n } => artin(&word, i, n),
        Command::Boundary(cmd) => boundary::dispatch(cmd),
        Command::VerifyPaper => verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::Malformed(_) | Error::Serde(_) => 2,
                Error::LengthGuard { .. } => 3,
                _ => 1,
            })
        }
    }
}

fn mi(word: &str, n: u32, guard: usize) -> Result<(), Failure> {
    let beta = BraidWord::parse(word, n)?;
    println!("{}", mi_braid_with_guard(&beta, guard)?);
    Ok(())
}

fn walk(args: WalkArgs) -> Result<(), Failure> {
    let mut config = match &args.config {
        Some(path) => WalkConfig::from_json(&read_file(path)?)?,
        None => {
            let dist = match args.dist.as_str() {
                "uniform-s" => DistributionSpec::canned(DistKind::UniformS),
                "uniform-sigma" => DistributionSpec::canned(DistKind::UniformSigma),
                path => serde_json::from_str(&read_file(path.as_ref())?)
                    .map_err(|e| Error::Serde(format!("{path}: {e}")))?,
            };
            let mut c = WalkConfig::new(args.n, args.steps, args.paths, args.seed, dist);
            c.length_guard = args.guard;
            c
        }
    };
    if !args.checkpoints.is_empty() {
        config.checkpoints = args.checkpoints.clone();
    }
    let opts = ExperimentOptions {
        theorem2: args.theorem2 || args.selective,
        selective: args.selective,
        artin_i: args.artin_i,
        ..Default::default()
    };
    let report = run(&config, &opts)?;
    let format = match args.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    emit(&report, format, args.out.as_deref())?;
    if !report.failures.is_empty() {
        eprintln!("{} path(s) aborted", report.failures.len());
    }
    Ok(())
}

fn artin(word: &str, i: u32, n: u32) -> Result<(), Failure> {
    let beta = BraidWord::parse(word, n)?;
    if i == 0 || i > n {
        return Err(Error::Malformed(format!("index {i} outside 1..={n}")).into());
    }
    let image = &braid_images(&beta)[(i - 1) as usize];
    println!("gamma(x{i}) = {}", format_free(image.letters(), "x"));
    if beta.is_pure() {
        println!("A{i} = {}", format_free(a_word(&beta, i)?.letters(), "x"));
    }
    Ok(())
}

fn verify() -> Result<(), Failure> {
    let checks = golden::all_checks()?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut failed = 0;
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {:width$}", c.name);
        if !c.passed {
            failed += 1;
            println!("      expected: {}", c.expected);
            println!("      got:      {}", c.got);
        }
    }
    println!(
        "{} of {} checks passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        return Err(Failure::Verify(format!("{failed} check(s) failed")));
    }
    Ok(())
}
