//! `sympow`: construct, analyze, classify, enumerate, and cross-check the
//! bracket tables built from a matrix and one of its eigenvectors.
//!
//! Every command emits a single line of JSON on stdout (or to `--out`).
//! Exit codes: 0 success, 1 malformed input, 2 domain error (bad
//! eigenvector, singular transform, unsupported field, ...), 3 budget
//! exceeded.

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use sympow::{
    brute_force_iso, center, check_alternating_jacobi, classify, derived_series, fingerprint,
    gl_orbits, graded_table, is_nilpotent, is_solvable, iso_class_count, lower_central_series,
    structure_constants, validate_seed, Error, Field, Fingerprint, HomWitness, JacobiCheck,
    LieTable, Matrix, Scalar, SeedPair, SeriesReport, DEFAULT_ENUM_BUDGET, DEFAULT_ISO_BUDGET,
};

#[derive(Parser)]
#[command(name = "sympow", version, about = "Lie bracket tables on symmetric powers", long_about = None)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct SeedArgs {
    /// Field tag: Q, Qi, F<p>, or Fp together with --p.
    #[arg(long)]
    field: String,
    /// Prime modulus, used when --field is the bare tag Fp.
    #[arg(long)]
    p: Option<u64>,
    /// Square matrix as a JSON array of rows (integers or scalar strings),
    /// inline or @path.
    #[arg(long)]
    matrix: String,
    /// Eigenvector as a JSON array, inline or @path.
    #[arg(long)]
    w: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the bracket table of a seed in one degree.
    Construct {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the graded table over all degrees up to a bound.
    Graded {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariants of a table: Jacobi check, series, center, fingerprint.
    Analyze {
        /// Table JSON file produced by construct/graded. Omit to analyze a
        /// seed given with --field/--matrix/--w/--degree.
        table: Option<PathBuf>,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Name the family of a two-variable seed over Q(i).
    Classify {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        degree: usize,
        /// Emit the full report (label, witness, fingerprint) instead of
        /// just the label.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate seed pairs over F_p and partition them into conjugation
    /// orbits.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        include_zero_w: bool,
        /// Cap on the number of scanned candidates (default 10^7).
        #[arg(long)]
        budget: Option<u64>,
        /// Also group the orbit representatives into isomorphism classes of
        /// degree-d tables.
        #[arg(long)]
        iso_degree: Option<usize>,
        /// Budget for each brute-force isomorphism search (default 10^6).
        #[arg(long)]
        iso_budget: Option<u64>,
        /// Write a CSV of orbit sizes to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an isomorphism between two table files over F_p.
    VerifyIso {
        table1: PathBuf,
        table2: PathBuf,
        /// Cap on |GL_N(F_p)| for the search (default 10^6).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Anything the commands can fail with, tagged with its exit code.
enum Failure {
    Malformed(String),
    Domain(Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Malformed(_) => 1,
            Failure::Domain(Error::BudgetExceeded { .. }) => 3,
            Failure::Domain(Error::Parse(_)) => 1,
            Failure::Domain(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Malformed(msg) => msg.clone(),
            Failure::Domain(err) => err.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        Failure::Domain(err)
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Failure {
        Failure::Malformed(err.to_string())
    }
}

fn parse_field(tag: &str, p: Option<u64>) -> Result<Field, Failure> {
    match (tag, p) {
        ("Fp", Some(p)) => Ok(Field::prime(p)?),
        ("Fp", None) => Err(Failure::Malformed("--field Fp needs --p".into())),
        (tag, _) => Ok(Field::from_tag(tag)?),
    }
}

/// Inline JSON or `@path` indirection.
fn read_arg(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(fs::read_to_string(path)?),
        None => Ok(arg.to_string()),
    }
}

fn scalar_from_value(field: Field, v: &Value) -> Result<Scalar, Failure> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| field.from_i64(x))
            .ok_or_else(|| Failure::Malformed(format!("entry {n} is not an integer"))),
        Value::String(s) => Ok(field.parse_scalar(s)?),
        other => Err(Failure::Malformed(format!("entry {other} is neither number nor string"))),
    }
}

fn parse_matrix(field: Field, arg: &str) -> Result<Matrix, Failure> {
    let text = read_arg(arg)?;
    let rows: Vec<Vec<Value>> = serde_json::from_str(&text)
        .map_err(|e| Failure::Malformed(format!("matrix: {e}")))?;
    let rows = rows
        .iter()
        .map(|row| row.iter().map(|v| scalar_from_value(field, v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(field, rows)?)
}

fn parse_vector(field: Field, arg: &str) -> Result<Vec<Scalar>, Failure> {
    let text = read_arg(arg)?;
    let entries: Vec<Value> = serde_json::from_str(&text)
        .map_err(|e| Failure::Malformed(format!("vector: {e}")))?;
    entries.iter().map(|v| scalar_from_value(field, v)).collect()
}

fn parse_seed(args: &SeedArgs) -> Result<SeedPair, Failure> {
    let field = parse_field(&args.field, args.p)?;
    let a = parse_matrix(field, &args.matrix)?;
    let w = parse_vector(field, &args.w)?;
    Ok(validate_seed(&a, &w)?)
}

fn load_table(path: &Path) -> Result<LieTable, Failure> {
    let text = fs::read_to_string(path)?;
    Ok(LieTable::from_json_str(&text)?)
}

fn emit(json: String, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => Ok(fs::write(path, json + "\n")?),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure::Malformed(e.to_string()))
}

#[derive(Serialize)]
struct AnalyzeReport {
    dim: usize,
    field: String,
    jacobi: JacobiCheck,
    derived: SeriesReport,
    lower_central: SeriesReport,
    is_solvable: bool,
    nilpotency_class: Option<usize>,
    center_dim: usize,
    fingerprint: Fingerprint,
    content_hash: String,
}

fn analyze_table(table: &LieTable) -> AnalyzeReport {
    AnalyzeReport {
        dim: table.dim(),
        field: table.field().tag(),
        jacobi: check_alternating_jacobi(table),
        derived: derived_series(table),
        lower_central: lower_central_series(table),
        is_solvable: is_solvable(table),
        nilpotency_class: is_nilpotent(table),
        center_dim: center(table).dim(),
        fingerprint: fingerprint(table),
        content_hash: table.content_hash(),
    }
}

#[derive(Serialize)]
struct VerifyIsoReport {
    isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<HomWitness>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Construct { seed, degree, out } => {
            let seed = parse_seed(&seed)?;
            let table = structure_constants(&seed, degree)?;
            emit(table.to_json_string(), out.as_deref())
        }
        Cmd::Graded { seed, max_degree, out } => {
            let seed = parse_seed(&seed)?;
            let table = graded_table(&seed, max_degree)?;
            emit(table.to_json_string(), out.as_deref())
        }
        Cmd::Analyze { table, field, p, matrix, w, degree, out } => {
            let table = match (table, field, matrix, w, degree) {
                (Some(path), None, None, None, None) => load_table(&path)?,
                (None, Some(field), Some(matrix), Some(w), Some(degree)) => {
                    let args = SeedArgs { field, p, matrix, w };
                    structure_constants(&parse_seed(&args)?, degree)?
                }
                _ => {
                    return Err(Failure::Malformed(
                        "analyze takes either a table file or all of --field/--matrix/--w/--degree".into(),
                    ))
                }
            };
            emit(to_json(&analyze_table(&table))?, out.as_deref())
        }
        Cmd::Classify { seed, degree, full, out } => {
            let seed = parse_seed(&seed)?;
            let report = classify(&seed, degree)?;
            let json = if full { to_json(&report)? } else { to_json(&report.label)? };
            emit(json, out.as_deref())
        }
        Cmd::Enumerate { n, p, include_zero_w, budget, iso_degree, iso_budget, csv, out } => {
            let budget = budget.unwrap_or(DEFAULT_ENUM_BUDGET);
            let orbits = gl_orbits(n, p, include_zero_w, budget)?;
            if let Some(path) = csv {
                fs::write(path, orbits.orbit_sizes_csv())?;
            }
            let json = match iso_degree {
                None => to_json(&orbits)?,
                Some(d) => {
                    let iso = iso_class_count(
                        n,
                        p,
                        d,
                        include_zero_w,
                        budget,
                        iso_budget.unwrap_or(DEFAULT_ISO_BUDGET),
                    )?;
                    #[derive(Serialize)]
                    struct Combined {
                        orbits: sympow::OrbitReport,
                        iso: sympow::IsoClassReport,
                    }
                    to_json(&Combined { orbits, iso })?
                }
            };
            emit(json, out.as_deref())
        }
        Cmd::VerifyIso { table1, table2, budget, out } => {
            let t1 = load_table(&table1)?;
            let t2 = load_table(&table2)?;
            let witness = brute_force_iso(&t1, &t2, budget.unwrap_or(DEFAULT_ISO_BUDGET))?;
            let report = VerifyIsoReport { isomorphic: witness.is_some(), witness };
            emit(to_json(&report)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version print to stdout and succeed; anything else is a
            // usage error
            let _ = err.print();
            return if err.exit_code() == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
