use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
mod report;
mod workspace;

use ldb_core::Policy;
use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 64,
            CliError::Precondition(_) => 65,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ldb", version, about = "Exact constructions and checks for LDB division algebras")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trial budget for randomized solvers.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Sample points for sampled checks.
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Dim1,
    Quadratic,
    Quaternion,
    Octonion,
    #[value(name = "hyper_radicial", alias = "hyper-radicial")]
    HyperRadicial,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Field descriptor, e.g. `Q`, `Fp(3)`, `F2(t)`, `GF(2,2,w^2+w+1)`.
    #[arg(long)]
    pub field: String,
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Constant term of `X^2 + c1 X + c0` (quadratic).
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Option<String>,
    /// Linear term of `X^2 + c1 X + c0` (quadratic).
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    /// `a,b`: the binary form `<a,b>`, or `[a,b]` in characteristic 2.
    #[arg(long, allow_hyphen_values = true)]
    pub q2: Option<String>,
    /// Twist of the doubling (octonion).
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
    /// Generator squares (hyper-radicial), comma-separated.
    #[arg(long)]
    pub gens: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TripleArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "star")]
    pub star: String,
    #[arg(long, default_value = "bullet")]
    pub bullet: String,
}

#[derive(Debug, Args)]
pub struct TwistArgs {
    #[command(flatten)]
    pub triple: TripleArgs,
    /// Check `det Gamma = 0 <=> q~ = 0`.
    #[arg(long)]
    pub singular_scan: bool,
    /// Certificate for the pair `y,z` (vector names or `*` for zero).
    #[arg(long)]
    pub lld: Option<String>,
    #[arg(long)]
    pub hyperplane: bool,
    #[arg(long)]
    pub minrank: bool,
    #[arg(long)]
    pub closure: bool,
}

#[derive(Debug, Args)]
pub struct FormArgs {
    pub file: PathBuf,
    /// Form name; defaults to the first form, else the attached form of
    /// `star`/`bullet`.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub diag: bool,
    #[arg(long)]
    pub arf: bool,
    #[arg(long)]
    pub disc: bool,
    #[arg(long)]
    pub aniso: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a canonical triple and write it as a workspace file.
    Construct(ConstructArgs),
    /// Interpolate and verify the attached form of two laws.
    Attach(TripleArgs),
    /// Regularity, LDB identity, anisotropy and uniqueness of the inversion.
    Verify(TripleArgs),
    /// Move the triple to an `e`-standard one.
    Standardize {
        #[command(flatten)]
        triple: TripleArgs,
        /// Vector name or comma-separated literal with `q(e) = 1`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Match the triple against the canonical models.
    Classify(TripleArgs),
    /// Search for an equivalence witness between two triples.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Matrix name (in either file) with `q_b(iso x) = q_a(x)`.
        #[arg(long)]
        iso: Option<String>,
    },
    /// Twisted operator space analyses.
    Twist(TwistArgs),
    /// Quadratic form invariants.
    Form(FormArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut policy = Policy::with_seed(cli.seed);
    if let Some(b) = cli.budget {
        policy.budget = b;
    }
    if let Some(s) = cli.samples {
        policy.samples = s;
    }
    let result = match &cli.command {
        Command::Construct(a) => commands::construct(a, &policy),
        Command::Attach(a) => commands::attach(a),
        Command::Verify(a) => commands::verify(a, &policy),
        Command::Standardize { triple, at, out } => commands::standardize(triple, at, out.as_deref(), &policy),
        Command::Classify(a) => commands::classify(a, &policy),
        Command::Equiv { a, b, iso } => commands::equiv(a, b, iso.as_deref(), &policy),
        Command::Twist(a) => commands::twist(a, &policy),
        Command::Form(a) => commands::form(a, &policy),
    };
    match result {
        Ok(report) => {
            print!("{}", render(&report, cli.format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    }
}
