use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polyreduct_core::classifier::{self, ClassifyError};
use polyreduct_core::decomposition::{er_classify, DecompError};
use polyreduct_core::expansion::{self, ExpansionError, Family, Generators};
use polyreduct_core::parser::CollectionError;
use polyreduct_core::unary::definable_functions;
use polyreduct_core::{parse_collection, parse_poly, render, MPoly, ParseError, Rat, UPoly, Var};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "polyreduct", version, about = "Classify polynomial reducts of the complex field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the collection in FILE (one polynomial per line, `-` for stdin).
    Classify { file: PathBuf },
    /// Weak and strong additive or multiplicative decomposition of a bivariate polynomial.
    Decompose { poly: String },
    /// Decide interdefinability of the collections in two files.
    Interdef { file_a: PathBuf, file_b: PathBuf },
    /// Growth series of |P(A, A)| over a family of sets.
    Expansion {
        poly: String,
        #[arg(long, value_enum, default_value = "ap")]
        family: FamilyArg,
        /// Comma-separated ascending sizes; coefficient bounds for `witness`.
        #[arg(long, value_delimiter = ',', default_value = "16,64,256")]
        sizes: Vec<u64>,
        /// First element of the progression.
        #[arg(long, default_value = "1")]
        start: String,
        /// AP step or GP ratio; defaults to 1 and 2.
        #[arg(long)]
        step: Option<String>,
        /// Witness generators: names for formal mode, integers for integer mode.
        #[arg(long, value_delimiter = ',', default_value = "x1")]
        generators: Vec<String>,
        #[arg(long, default_value_t = 2)]
        degree_cap: u32,
        /// Also write the rows as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Definable unary maps of a unary polynomial up to a degree bound.
    Unary {
        poly: String,
        #[arg(long, default_value_t = 5)]
        bound: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Ap,
    Gp,
    Witness,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Inputs {
    Collection(Vec<String>),
    Pair { a: Vec<String>, b: Vec<String> },
}

#[derive(Serialize)]
struct ReportEnvelope {
    tool_version: &'static str,
    command: &'static str,
    inputs: Inputs,
    result: serde_json::Value,
    diagnostics: Vec<String>,
}

#[derive(Serialize)]
struct ExpansionSummary {
    family: Family,
    rows: Vec<expansion::ExpansionRow>,
    final_exponent: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_EMPTY: u8 = 3;
const EXIT_SHAPE: u8 = 4;
const EXIT_GUARD: u8 = 5;
const EXIT_PARAMS: u8 = 6;

impl From<CollectionError> for Failure {
    fn from(e: CollectionError) -> Failure {
        Failure::new(EXIT_PARSE, format!("parse error: {e}"))
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::new(EXIT_PARSE, format!("parse error: line 1: {e}"))
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Failure {
        match e {
            ClassifyError::EmptyCollection => Failure::new(EXIT_EMPTY, "empty collection"),
            other => Failure::new(EXIT_SHAPE, other.to_string()),
        }
    }
}

impl From<DecompError> for Failure {
    fn from(e: DecompError) -> Failure {
        match e {
            DecompError::NotBivariate(_) => Failure::new(EXIT_SHAPE, e.to_string()),
            other => Failure::new(EXIT_IO, other.to_string()),
        }
    }
}

impl From<ExpansionError> for Failure {
    fn from(e: ExpansionError) -> Failure {
        let code = match e {
            ExpansionError::Guard { .. } => EXIT_GUARD,
            ExpansionError::TooManyVariables(_) => EXIT_SHAPE,
            _ => EXIT_PARAMS,
        };
        Failure::new(code, e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let text =
        if path == Path::new("-") { std::io::read_to_string(std::io::stdin()) } else { std::fs::read_to_string(path) };
    text.map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn read_collection(path: &Path) -> Result<Vec<MPoly>, Failure> {
    let ps = parse_collection(&read_input(path)?)?;
    if ps.is_empty() {
        return Err(Failure::new(EXIT_EMPTY, format!("{}: empty collection", path.display())));
    }
    Ok(ps)
}

fn rendered(ps: &[MPoly]) -> Vec<String> {
    ps.iter().map(render).collect()
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn parse_rat(s: &str) -> Result<Rat, Failure> {
    s.parse().map_err(|_| Failure::new(EXIT_PARAMS, format!("not a rational number: {s}")))
}

fn envelope(
    command: &'static str,
    inputs: Inputs,
    result: serde_json::Value,
    diagnostics: Vec<String>,
) -> ReportEnvelope {
    ReportEnvelope { tool_version: env!("CARGO_PKG_VERSION"), command, inputs, result, diagnostics }
}

fn run(cli: Cli) -> Result<ReportEnvelope, Failure> {
    match cli.command {
        Command::Classify { file } => {
            let ps = read_collection(&file)?;
            let report = classifier::classify(&ps)?;
            Ok(envelope("classify", Inputs::Collection(rendered(&ps)), to_value(&report), Vec::new()))
        }
        Command::Decompose { poly } => {
            let p = parse_poly(&poly)?;
            let verdict = er_classify(&p)?;
            Ok(envelope("decompose", Inputs::Collection(vec![render(&p)]), to_value(&verdict), Vec::new()))
        }
        Command::Interdef { file_a, file_b } => {
            let a = read_collection(&file_a)?;
            let b = read_collection(&file_b)?;
            let report = classifier::interdefinable(&a, &b)?;
            let diagnostics = match &report.unary {
                Some(u) if u.discrepancy => vec![format!("two-clause criterion disagrees: {}", u.explanation)],
                _ => Vec::new(),
            };
            let inputs = Inputs::Pair { a: rendered(&a), b: rendered(&b) };
            Ok(envelope("interdef", inputs, to_value(&report), diagnostics))
        }
        Command::Expansion { poly, family, sizes, start, step, generators, degree_cap, csv } => {
            let p = parse_poly(&poly)?;
            let family = match family {
                FamilyArg::Ap => {
                    Family::Ap { start: parse_rat(&start)?, step: parse_rat(step.as_deref().unwrap_or("1"))? }
                }
                FamilyArg::Gp => {
                    Family::Gp { start: parse_rat(&start)?, ratio: parse_rat(step.as_deref().unwrap_or("2"))? }
                }
                FamilyArg::Witness => {
                    let ints: Option<Vec<i64>> = generators.iter().map(|g| g.parse().ok()).collect();
                    let generators = match ints {
                        Some(v) => Generators::Integer(v),
                        None => Generators::Formal(generators.iter().map(|g| Var::new(g)).collect()),
                    };
                    Family::Witness { generators, degree_cap }
                }
            };
            let rows = expansion::expansion_series(&p, &family, &sizes)?;
            let final_exponent = rows.last().map(|r| expansion::format_milli(r.exponent)).unwrap_or_default();
            if let Some(path) = &csv {
                std::fs::write(path, expansion::to_csv(&rows))
                    .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
            }
            let summary = ExpansionSummary { family, rows, final_exponent, csv: csv.map(|p| p.display().to_string()) };
            Ok(envelope("expansion", Inputs::Collection(vec![render(&p)]), to_value(&summary), Vec::new()))
        }
        Command::Unary { poly, bound } => {
            let p = parse_poly(&poly)?;
            let u = UPoly::from_unary_mpoly(&p, &Var::new("x"))
                .map_err(|_| Failure::new(EXIT_SHAPE, format!("not unary: {}", render(&p))))?;
            let family = definable_functions(&u, bound);
            Ok(envelope("unary", Inputs::Collection(vec![render(&p)]), to_value(&family), Vec::new()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
