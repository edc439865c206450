//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage or parameter error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::ap::{verify_covering_jobs, IntegerSet, NaturalSequence};
use crate::constructions::{BlockSet, DigitSet};
use crate::density::{ratio_series, Normalization, ASYMPTOTIC_NOTE};
use crate::error::{Error, Result};
use crate::greedy::{generalized_greedy, stanley_sequence, Limit};
use crate::random_cover::{default_c, growth_report, sample_set, RandomCoverParams};
use crate::FORMAT_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "apcover",
    version,
    about = "Progression-free greedy sequences and AP_k-covering sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a greedy sequence.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Sweep a range for covering witnesses.
    Verify(VerifyArgs),
    /// Tabulate A(n) / (n^alpha (ln n)^beta) at checkpoints.
    Density(DensityArgs),
    /// Sample the random covering set and report failures and growth.
    Sample(SampleArgs),
}

#[derive(Subcommand, Debug)]
pub enum GenerateKind {
    /// Stanley sequence of order k from a progression-free seed.
    #[command(group(clap::ArgGroup::new("limit").required(true).args(["count", "max"])))]
    Stanley {
        /// Comma-separated seed values.
        #[arg(long, value_delimiter = ',', required = true)]
        seed: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Total number of terms, seed included.
        #[arg(long)]
        count: Option<usize>,
        /// Largest value to emit.
        #[arg(long)]
        max: Option<u64>,
        #[command(flatten)]
        output: SequenceOutput,
    },
    /// The `n != k*b - a` greedy set started from a single element.
    Generalized {
        #[arg(long)]
        a0: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max: u64,
        #[command(flatten)]
        output: SequenceOutput,
    },
}

#[derive(Args, Debug)]
pub struct SequenceOutput {
    #[arg(long, value_enum, default_value_t = SequenceFormat::Text)]
    pub format: SequenceFormat,
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Parameters of `--set sample`.
#[derive(Args, Debug, Clone)]
pub struct SampleSource {
    /// Constant c of the sampled set (default 1.1·default_c(k)).
    #[arg(long)]
    pub c: Option<f64>,
    /// RNG seed of the sampled set.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// blocks|thm1, digits|thm2, sample, or file:PATH
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
    /// Worker count for the sweep (0 = all cores).
    #[arg(long, env = "APCOVER_JOBS", default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub sample: SampleSource,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    /// blocks|thm1, digits|thm2, sample, or file:PATH
    #[arg(long)]
    pub set: String,
    /// Comma-separated, strictly ascending.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub checkpoints: Vec<u64>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Progression length for `--set sample`.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub sample: SampleSource,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Defaults to 1.1·(4k(k-1))^(1/(k-1)).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub nmax: u64,
    /// Start of the failure sweep (default max(2, nmax/100)).
    #[arg(long)]
    pub from: Option<u64>,
    /// Write the sampled set here, one value per line; otherwise it is
    /// embedded in the JSON summary.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "APCOVER_JOBS", default_value_t = 0)]
    pub jobs: usize,
}

/// A set named on the command line.
pub enum SetChoice {
    Blocks,
    Digits,
    Sample,
    File(PathBuf),
}

impl SetChoice {
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "blocks" | "thm1" => Ok(Self::Blocks),
            "digits" | "thm2" => Ok(Self::Digits),
            "sample" => Ok(Self::Sample),
            _ => match spec.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::File(PathBuf::from(path))),
                _ => Err(Error::Precondition(format!(
                    "unknown set {spec:?}; expected blocks, digits, sample or file:PATH"
                ))),
            },
        }
    }

    /// Materializes the set. `n_max` bounds sampled sets.
    fn load(&self, k: usize, sample: &SampleSource, n_max: u64) -> Result<Box<dyn IntegerSet>> {
        Ok(match self {
            Self::Blocks => Box::new(BlockSet::new()),
            Self::Digits => Box::new(DigitSet),
            Self::Sample => {
                let c = sample.c.unwrap_or_else(|| 1.1 * default_c(k));
                let params = RandomCoverParams::new(k, c, sample.seed, n_max.max(2))?;
                Box::new(sample_set(&params)?)
            }
            Self::File(path) => Box::new(read_sequence(path)?),
        })
    }
}

impl IntegerSet for Box<dyn IntegerSet> {
    fn contains(&self, n: u64) -> bool {
        (**self).contains(n)
    }

    fn count_up_to(&self, n: u64) -> Result<u64> {
        (**self).count_up_to(n)
    }
}

fn read_sequence(path: &PathBuf) -> Result<NaturalSequence> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    NaturalSequence::parse_text(&text)
}

enum Outcome {
    Ok,
    Failed,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, path: Option<&PathBuf>, text: &str) -> Result<()> {
        match path {
            Some(p) => fs::write(p, text)
                .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", p.display()))),
            None => self
                .out
                .write_all(text.as_bytes())
                .map_err(|e| Error::Precondition(format!("cannot write output: {e}"))),
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn sequence_text(seq: &NaturalSequence, format: SequenceFormat) -> String {
    match format {
        SequenceFormat::Text => seq.to_text(),
        SequenceFormat::Json => json_text(&json!(seq.as_slice())),
    }
}

fn generate(kind: GenerateKind, io: &mut Io) -> Result<Outcome> {
    match kind {
        GenerateKind::Stanley {
            seed,
            k,
            count,
            max,
            output,
        } => {
            let seed = NaturalSequence::new(seed)
                .map_err(|_| Error::Precondition("seed must be strictly increasing".into()))?;
            let limit = match (count, max) {
                (Some(c), _) => Limit::Count(c),
                (None, Some(m)) => Limit::MaxValue(m),
                (None, None) => unreachable!("clap enforces the limit group"),
            };
            let seq = stanley_sequence(&seed, k, limit)?;
            io.emit(output.output.as_ref(), &sequence_text(&seq, output.format))?;
        }
        GenerateKind::Generalized { a0, k, max, output } => {
            let g = generalized_greedy(a0, k, max)?;
            if !g.structure_guaranteed {
                let _ = writeln!(
                    io.err,
                    "warning: a0={a0}, k={k} is outside a0 >= 3, k >= 4; no interval structure is known"
                );
            }
            io.emit(
                output.output.as_ref(),
                &sequence_text(&g.sequence, output.format),
            )?;
        }
    }
    Ok(Outcome::Ok)
}

fn verify(args: VerifyArgs, io: &mut Io) -> Result<Outcome> {
    let choice = SetChoice::parse(&args.set)?;
    let set = choice.load(args.k, &args.sample, args.to)?;
    let report = verify_covering_jobs(&set, args.k, args.from, args.to, args.jobs)?;
    let doc = json!({
        "params": { "set": args.set, "k": args.k, "from": args.from, "to": args.to },
        "failures": report.failures,
        "witnesses_checked": report.witnesses_checked,
        "version": FORMAT_VERSION,
    });
    io.emit(None, &json_text(&doc))?;
    Ok(if report.is_covered() {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn density(args: DensityArgs, io: &mut Io) -> Result<Outcome> {
    let choice = SetChoice::parse(&args.set)?;
    let n_max = *args.checkpoints.last().expect("clap requires a checkpoint");
    let set = choice.load(args.k, &args.sample, n_max)?;
    let norm = Normalization::new(args.alpha, args.beta);
    let table = ratio_series(&set, &args.checkpoints, norm)?;
    let text = match args.format {
        TableFormat::Csv => table.to_csv(),
        TableFormat::Json => {
            let mut v = table.to_json_value(json!({ "set": args.set }));
            v["note"] = json!(ASYMPTOTIC_NOTE);
            json_text(&v)
        }
    };
    io.emit(args.output.as_ref(), &text)?;
    Ok(Outcome::Ok)
}

/// Powers of ten up to `n_max`, then `n_max` itself.
fn growth_checkpoints(n_max: u64) -> Vec<u64> {
    let mut cps: Vec<u64> = std::iter::successors(Some(10u64), |x| x.checked_mul(10))
        .take_while(|&x| x <= n_max)
        .collect();
    if cps.last() != Some(&n_max) && n_max >= 2 {
        cps.push(n_max);
    }
    cps
}

fn sample(args: SampleArgs, io: &mut Io) -> Result<Outcome> {
    let c = args.c.unwrap_or_else(|| 1.1 * default_c(args.k));
    let params = RandomCoverParams::new(args.k, c, args.seed, args.nmax)?;
    let set = sample_set(&params)?;
    let from = args.from.unwrap_or((args.nmax / 100).max(2));
    let report = verify_covering_jobs(&set, args.k, from, args.nmax, args.jobs)?;
    let growth = growth_report(&set, args.k, &growth_checkpoints(args.nmax))?;
    let mut doc = growth.to_json_value(json!({
        "k": args.k,
        "c": c,
        "seed": args.seed,
        "nmax": args.nmax,
        "from": from,
    }));
    doc["failures"] = json!(report.failures);
    doc["size"] = json!(set.len());
    doc["note"] = json!(ASYMPTOTIC_NOTE);
    match &args.out {
        Some(path) => io.emit(Some(path), &set.to_text())?,
        None => doc["set"] = json!(set.as_slice()),
    }
    io.emit(None, &json_text(&doc))?;
    Ok(Outcome::Ok)
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::Generate { kind } => generate(kind, &mut io),
        Command::Verify(a) => verify(a, &mut io),
        Command::Density(a) => density(a, &mut io),
        Command::Sample(a) => sample(a, &mut io),
    };
    match result {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Failed) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_USAGE
        }
    }
}
