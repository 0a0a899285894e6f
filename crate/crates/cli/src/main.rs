//! `frobenius`: command-line front end for frobenius-core.
//!
//! Exit codes: 0 when the requested property holds, 1 when the answer is a
//! mathematical negative (not Frobenius, divergent limit, ..), 2 on usage
//! errors.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frobenius_core::Family;
use serde_json::{Map, Value};

mod commands;
mod parse;
mod sweep;

#[derive(Parser, Debug)]
#[command(name = "frobenius", version, about = "Frobenius functionals on parabolic and seaweed subalgebras of sl(n)")]
pub struct Cli {
    /// Output format. Not every command has a DOT form.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args, Clone, Debug)]
pub struct FamilyArgs {
    /// cyclic, prime, subprime, upper-triangular or dk.
    #[arg(long, default_value = "cyclic")]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
}

/// An algebra given as a parabolic or a seaweed.
#[derive(Args, Clone, Debug, Default)]
pub struct AlgebraArgs {
    /// `n,m` for P(n, m).
    #[arg(long, conflicts_with_all = ["top", "bottom"])]
    pub parabolic: Option<String>,
    /// Top composition of a seaweed, e.g. `3,2`.
    #[arg(long, requires = "bottom")]
    pub top: Option<String>,
    /// Bottom composition of a seaweed.
    #[arg(long, requires = "top")]
    pub bottom: Option<String>,
}

#[derive(Args, Clone, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    /// Test seeded random functionals instead of a family.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Invert,
    Lagrangian,
    Peel,
}

#[derive(Args, Clone, Debug)]
pub struct RmatrixArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum, default_value_t = Method::Invert)]
    pub method: Method,
    /// Also compute [r, r] exactly.
    #[arg(long)]
    pub verify_cybe: bool,
}

#[derive(Args, Clone, Debug)]
pub struct MeanderArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    /// Compare with the least kernel dimension over this many random functionals.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    /// The cyclic sequence with n deleted, cut at a monotone rotation.
    Cyclic,
    /// The chain of the maximal triple starting at m.
    Chain,
}

#[derive(Args, Clone, Debug)]
pub struct ProgressionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Reading::Cyclic)]
    pub reading: Reading,
}

#[derive(Subcommand, Clone, Debug)]
pub enum McybeAction {
    /// The root progression with its descents.
    Progression(ProgressionArgs),
    /// Limit of the maximal triple's mapped pairs under exp(th).
    Degenerate {
        #[command(flatten)]
        p: ProgressionArgs,
        /// Diagonal of h, e.g. `0,-1,-2`. Defaults to the cyclic principal element.
        #[arg(long)]
        h: Option<String>,
    },
    /// An integer h whose limit keeps exactly the given pairs.
    SeparatingH {
        #[command(flatten)]
        p: ProgressionArgs,
        /// Pairs to keep, e.g. `7>4,6>3`.
        #[arg(long, default_value = "")]
        keep: String,
    },
}

#[derive(Args, Clone, Debug)]
pub struct GraphArgs {
    /// Undirected edges `0-1,1-2,..`.
    #[arg(long, conflicts_with = "arcs")]
    pub edges: Option<String>,
    /// Oriented edges `0>1,2>1,..`.
    #[arg(long)]
    pub arcs: Option<String>,
    /// Vertex count; defaults to one more than the largest vertex used.
    #[arg(long)]
    pub vertices: Option<usize>,
}

#[derive(Subcommand, Clone, Debug)]
pub enum LocalRingAction {
    /// Dimensions of the radical powers.
    Dims(GraphArgs),
    /// Recover the graph from the ring's presentation.
    Reconstruct {
        #[command(flatten)]
        graph: GraphArgs,
        /// JSON presentation `{"generators": [..], "conflicts": [[a, b], ..]}`.
        #[arg(long, conflicts_with_all = ["edges", "arcs"])]
        presentation: Option<PathBuf>,
    },
    /// Dimensions of the reduced ring; needs `--arcs`.
    Reduced(GraphArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    /// Cyclic functional certified iff gcd(n, m) = 1; sampled kernel otherwise.
    Frobenius,
    /// Subprime functional Frobenius iff n ≡ ±1 mod m.
    Subprime,
    /// Root recursion equals the tree root.
    Root,
    /// tr ad(F̂) = dim/2 with an unbroken integer spectrum.
    Trace,
    /// Monotonicity of the cyclic weights along the root progression.
    Mcybe,
    /// The recursive Γ rebuild equals the direct construction.
    Rebuild,
}

#[derive(Args, Clone, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub property: Property,
    #[arg(long, default_value_t = 2)]
    pub min_n: usize,
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    /// Random functionals per non-coprime cell.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Clone, Debug)]
pub enum Command {
    /// The support S of a named functional.
    Support(FamilyArgs),
    /// The graph γ(S).
    Gamma(FamilyArgs),
    /// Statistics and DOT of the graph Γ(S).
    Biggraph(FamilyArgs),
    /// The principal element of a family's functional.
    Principal(FamilyArgs),
    /// Exact certificate for the Kirillov form.
    CheckFrobenius(CheckArgs),
    /// Solution of the classical Yang-Baxter equation from a Frobenius functional.
    Rmatrix(RmatrixArgs),
    /// Meander of a seaweed and its index.
    Meander(MeanderArgs),
    /// Admissible triples and their degenerations.
    Mcybe {
        #[command(subcommand)]
        action: McybeAction,
    },
    /// Full and reduced local rings of a graph.
    Localring {
        #[command(subcommand)]
        action: LocalRingAction,
    },
    /// Runs a property over an (n, m) grid.
    Sweep(SweepArgs),
    /// Re-checks a JSON certificate written by another command.
    Verify {
        input: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Support(_) => "support",
            Command::Gamma(_) => "gamma",
            Command::Biggraph(_) => "biggraph",
            Command::Principal(_) => "principal",
            Command::CheckFrobenius(_) => "check-frobenius",
            Command::Rmatrix(_) => "rmatrix",
            Command::Meander(_) => "meander",
            Command::Mcybe { .. } => "mcybe",
            Command::Localring { .. } => "localring",
            Command::Sweep(_) => "sweep",
            Command::Verify { .. } => "verify",
        }
    }
}

/// What a command produced, before formatting.
#[derive(Debug, Default)]
pub struct Report {
    pub json: Map<String, Value>,
    pub text: String,
    pub dot: Option<String>,
    /// The answer is a mathematical negative.
    pub negative: bool,
}

impl Report {
    pub fn put(&mut self, key: &str, v: impl serde::Serialize) {
        self.json.insert(key.to_string(), serde_json::to_value(v).expect("serialisable"));
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Negative(String),
}

impl From<frobenius_core::Error> for Failure {
    fn from(e: frobenius_core::Error) -> Self {
        use frobenius_core::Error as E;
        match e {
            E::Singular { .. } | E::Divergent(..) => Failure::Negative(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

const PRESENTATION_FLAGS: [&str; 3] = ["--format", "--out", "--threads"];

/// The arguments that determine the result: everything but the flags in
/// `PRESENTATION_FLAGS`.
pub fn semantic_args(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if PRESENTATION_FLAGS.contains(&a.as_str()) {
            it.next();
        } else if !PRESENTATION_FLAGS.iter().any(|f| a.starts_with(&format!("{f}="))) {
            out.push(a.clone());
        }
    }
    out
}

/// JSON certificate with the schema envelope.
pub fn envelope(command: &str, args: &[String], r: &Report) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(1));
    m.insert("command".into(), Value::from(command));
    m.insert("args".into(), Value::from(args.to_vec()));
    for (k, v) in &r.json {
        m.insert(k.clone(), v.clone());
    }
    Value::Object(m)
}

fn render(cli: &Cli, args: &[String], r: &Report) -> Result<String, Failure> {
    Ok(match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(cli.command.name(), args, r)).expect("valid json");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = r.text.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
        Format::Dot => match &r.dot {
            Some(d) => d.clone(),
            None => return Err(Failure::Usage(format!("`{}` has no DOT output", cli.command.name()))),
        },
    })
}

fn run(argv: Vec<String>) -> Result<bool, Failure> {
    let cli = match Cli::try_parse_from(std::iter::once("frobenius".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { Err(Failure::Usage(String::new())) } else { Ok(true) };
        }
    };
    let args = semantic_args(&argv);
    let header = format!("frobenius {}", args.join(" "));
    let report = commands::execute(&cli.command, &header)?;
    let body = render(&cli, &args, &report)?;
    match &cli.out {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(body.as_bytes());
        }
    }
    Ok(!report.negative)
}

fn main() -> ExitCode {
    match run(std::env::args().skip(1).collect()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
