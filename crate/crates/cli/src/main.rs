//! `ghost`: command line access to the ghost algebras and their loop models.
//!
//! Exit codes: 0 pass, 1 a check failed, 2 usage or input error, 3 budget exceeded.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ghost_algebra::Error;
use serde_json::{json, Value};

use config::{Overrides, CONFIG_ENV};

#[derive(Parser)]
#[command(name = "ghost", version, about = "Ghost algebras, their dilute versions and integrable loop models")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// JSON config file with defaults for seed, tol, budget, generalised and params.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Residual tolerance for numeric checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Largest number of diagrams or configurations to touch.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Use the thirteen-parameter family of boundary-arc weights.
    #[arg(long, global = true)]
    generalised: bool,
    /// JSON object of parameter values; `lambda` or `phi` set the spectral constant.
    #[arg(long, global = true)]
    params: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension table from the closed formulas.
    Dims(DimsArgs),
    /// List every basis diagram of one algebra.
    Enumerate {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        n: usize,
    },
    /// Multiply two elements.
    Mul {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Arith::Exact)]
        mode: Arith,
    },
    /// Apply one of the maps between algebras.
    Map {
        #[arg(value_enum)]
        map: MapKind,
        input: PathBuf,
        /// Target algebra for `include`.
        #[arg(long)]
        target: Option<String>,
        /// Apply the parameter shift after `embed`.
        #[arg(long)]
        shift: bool,
    },
    /// Check the three cellularity axioms.
    CellularCheck {
        #[arg(long)]
        variant: String,
        #[arg(long)]
        n: usize,
        /// Use this many random multipliers instead of the whole basis.
        #[arg(long)]
        sampled: Option<usize>,
    },
    /// Check a loop-model relation at seeded random points.
    Verify(VerifyArgs),
    /// Build the double-row transfer tangle and contract it.
    Transfer(TransferArgs),
}

#[derive(Args)]
struct DimsArgs {
    /// Single n or an inclusive range `a..b`.
    #[arg(long, default_value = "1..10")]
    n: String,
    /// Algebras to tabulate; defaults to the four ghost algebras.
    #[arg(long, value_delimiter = ',')]
    variant: Vec<String>,
    /// Compare against the embedded reference table (n ≤ 10).
    #[arg(long)]
    check_table2: bool,
    /// Enumerate each algebra and compare the count with the formula.
    #[arg(long)]
    enumerate_verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    relation: Relation,
    #[arg(long, value_enum, default_value_t = Model::Dense)]
    mode: Model,
    /// Boundary family; defaults to every family of the model.
    #[arg(long)]
    family: Option<String>,
    /// Bottom family for `commute`; defaults to the top one.
    #[arg(long)]
    bottom_family: Option<String>,
    #[arg(long, value_enum)]
    side: Option<SideArg>,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Strands for `commute`.
    #[arg(long, default_value_t = 2)]
    n: usize,
}

#[derive(Args)]
struct TransferArgs {
    #[arg(long, value_enum, default_value_t = Model::Dense)]
    mode: Model,
    #[arg(long)]
    n: usize,
    /// Top family name; sampled parameters.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    bottom_family: Option<String>,
    /// JSON with explicit `top` and `bottom` families, overriding the names.
    #[arg(long)]
    families: Option<PathBuf>,
    /// Spectral parameter `re` or `re,im`; sampled when absent.
    #[arg(long)]
    u: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Arith {
    Exact,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    Psi,
    Embed,
    AddStrand,
    Include,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum Relation {
    Ybe,
    Crossing,
    Inversion,
    Bybe,
    Commute,
}

#[derive(Clone, Copy, PartialEq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    Dense,
    Dilute,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Top,
    Bottom,
}

/// Why a command stopped without a result.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "usage", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Budget { .. } => (3, "budget"),
            Error::Singular(_) => (1, "singular"),
            Error::Invalid(_) => (2, "invalid"),
            Error::Parse(_) => (2, "parse"),
            _ => (2, "input"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

/// A finished command: what to print and whether its check passed.
pub struct Report {
    pub body: Output,
    pub pass: bool,
}

pub enum Output {
    Json(Value),
    Text(String),
}

impl Report {
    pub fn json(v: Value, pass: bool) -> Self {
        Report { body: Output::Json(v), pass }
    }
}

fn emit(out: &Option<PathBuf>, body: &Output) -> Result<(), Failure> {
    let text = match body {
        Output::Json(v) => serde_json::to_string_pretty(v).expect("json") + "\n",
        Output::Text(s) => s.clone(),
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    let cfg = config::resolve(Overrides {
        config: g.config.as_deref(),
        seed: g.seed,
        tol: g.tol,
        budget: g.budget,
        generalised: g.generalised,
        params: g.params.as_deref(),
        out: g.out.clone(),
    })?;
    match cli.command {
        Command::Dims(a) => commands::dims(&cfg, &a),
        Command::Enumerate { variant, n } => commands::enumerate(&cfg, &variant, n),
        Command::Mul { a, b, mode } => commands::mul(&cfg, &a, &b, mode),
        Command::Map { map, input, target, shift } => commands::map(&cfg, map, &input, target.as_deref(), shift),
        Command::CellularCheck { variant, n, sampled } => commands::cellular_check(&cfg, &variant, n, sampled),
        Command::Verify(a) => commands::verify(&cfg, &a),
        Command::Transfer(a) => commands::transfer(&cfg, &a),
    }
    .and_then(|r| emit(&cfg.out, &r.body).map(|_| r))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => ExitCode::from(if r.pass { 0 } else { 1 }),
        Err(f) => {
            let diag = json!({ "error": f.kind, "message": f.message });
            eprintln!("{diag}");
            ExitCode::from(f.code)
        }
    }
}
