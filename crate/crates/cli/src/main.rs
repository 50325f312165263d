//! Command-line front end: validation, derivation, bound reports, solving,
//! verification, and existence scans.
//!
//! Results go to stdout as JSON (17 significant digits, deterministic
//! bytes); human-readable summaries and structured errors go to stderr.
//! Exit codes: 0 success or solved, 2 no solution (or no search box),
//! 3 not converged (or failed verification), 1 input errors.

mod record;

use clap::{Parser, Subcommand, ValueEnum};
use ricci_homog::data::{validate_structure, validate_table, DataError};
use ricci_homog::io::{self, Document, LoadError};
use ricci_homog::solver::{
    scan_existence, solve_general, solve_two_summand, verify_solution, SolveOptions, SolveResult,
    SolveStatus,
};
use ricci_homog::{BoundsError, DeriveError, InvariantMetric, SolveError};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const THREADS_ENV: &str = "RICCI_HOMOG_THREADS";

#[derive(Parser)]
#[command(name = "ricci-homog", version, about = "Invariant metrics with prescribed Ricci curvature on compact homogeneous spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a structure-data or bracket-table file
    Validate {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive structure data from a bracket table
    Derive {
        table: PathBuf,
        /// Label for the derived data (defaults to the input file stem)
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the compactness constants and the search box
    Bounds {
        structure: PathBuf,
        tensor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve by constrained maximization of the scalar curvature
    Solve {
        structure: PathBuf,
        tensor: PathBuf,
        /// Gradient-norm convergence threshold
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Iteration cap per start
        #[arg(long = "max-iter", default_value_t = 10_000)]
        max_iter: u64,
        /// Number of deterministic multistart trials
        #[arg(long, default_value_t = 32)]
        starts: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a replayable run record (inputs digest, options, result)
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Solve a two-summand space by the closed form
    Solve2 {
        structure: PathBuf,
        tensor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Verify a candidate solution (x, c)
    Check {
        structure: PathBuf,
        tensor: PathBuf,
        /// Metric coefficients, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate existence over tensor rays (two summands)
    Scan {
        structure: PathBuf,
        #[arg(long)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
        format: ScanFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Structured failure: a machine-readable code (matching the library error
/// names), a message, optional detail, and the process exit code.
struct CliError {
    code: &'static str,
    message: String,
    detail: Option<serde_json::Value>,
    exit: u8,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>, exit: u8) -> Self {
        CliError { code, message: message.into(), detail: None, exit }
    }
}

impl From<LoadError> for CliError {
    fn from(err: LoadError) -> Self {
        let code = match &err {
            LoadError::Io { .. } => "Io",
            LoadError::Parse(_) => "ParseError",
            LoadError::Schema { .. } => "SchemaError",
            LoadError::Data(DataError::ZeroTensor) => "ZeroTensor",
            LoadError::Data(DataError::MissingZeta) => "MissingZeta",
            LoadError::Data(_) => "SchemaError",
        };
        CliError::new(code, err.to_string(), 1)
    }
}

impl From<DeriveError> for CliError {
    fn from(err: DeriveError) -> Self {
        let code = match &err {
            DeriveError::NonProportional { .. } => "NonProportional",
            DeriveError::NonScalarCasimir { .. } => "NonScalarCasimir",
        };
        CliError::new(code, err.to_string(), 1)
    }
}

impl From<SolveError> for CliError {
    fn from(err: SolveError) -> Self {
        let code = match &err {
            SolveError::WrongSummandCount { .. } => "WrongSummandCount",
            SolveError::DegenerateGamma => "DegenerateGamma",
            SolveError::NonIntermediate(_) => "NonIntermediate",
            SolveError::InvalidOptions(_) => "InvalidOptions",
        };
        CliError::new(code, err.to_string(), 1)
    }
}

impl From<BoundsError> for CliError {
    fn from(err: BoundsError) -> Self {
        let (code, exit) = match &err {
            BoundsError::TooFewSummands(_) => ("WrongSummandCount", 1),
            BoundsError::SummandCountTooLarge(_) => ("SummandCountTooLarge", 1),
            BoundsError::NotMaximal => ("NotMaximal", 2),
            BoundsError::UnsortedInput => ("UnsortedInput", 1),
        };
        CliError::new(code, err.to_string(), exit)
    }
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            println!("{}", io::to_json_compact(value));
            Ok(())
        }
        Some(path) => std::fs::write(path, io::to_json_pretty(value) + "\n").map_err(|e| {
            CliError::new("Io", format!("cannot write {}: {e}", path.display()), 1)
        }),
    }
}

fn summarize_solve(result: &SolveResult) {
    let status = match result.status {
        SolveStatus::Solved => "solved",
        SolveStatus::NoSolution => "no solution",
        SolveStatus::NotConverged => "not converged",
    };
    let mut line = format!("status: {status}");
    if let Some(c) = result.c {
        line += &format!("  c = {c:.6e}");
    }
    if let Some(r) = result.residual {
        line += &format!("  residual = {r:.3e}");
    }
    line += &format!(
        "  ({} iterations, {} starts)",
        result.diagnostics.iterations, result.diagnostics.starts
    );
    eprintln!("{line}");
    if let Some(note) = &result.diagnostics.note {
        eprintln!("note: {note}");
    }
}

fn status_exit(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Solved => 0,
        SolveStatus::NoSolution => 2,
        SolveStatus::NotConverged => 3,
    }
}

fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => Err(CliError::new("InvalidOptions", format!("{THREADS_ENV}: {e}"), 1)),
        Ok(text) => text.trim().parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| {
            CliError::new(
                "InvalidOptions",
                format!("{THREADS_ENV} must be a positive integer, got {text:?}"),
                1,
            )
        }),
    }
}

#[derive(Serialize)]
struct ValidateOutput {
    kind: &'static str,
    valid: bool,
    violations: Vec<ricci_homog::Violation>,
}

fn cmd_validate(path: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let (kind, report) = match io::load(path)? {
        Document::Structure(sd) => ("structure", validate_structure(&sd)),
        Document::Table(t) => ("table", validate_table(&t)),
    };
    let valid = report.is_valid();
    let output = ValidateOutput { kind, valid, violations: report.violations };
    emit(&output, out)?;
    if valid {
        eprintln!("{kind}: valid");
        Ok(0)
    } else {
        eprintln!("{kind}: {} violation(s)", output.violations.len());
        Ok(1)
    }
}

fn cmd_derive(table: &Path, label: Option<String>, out: Option<&Path>) -> Result<u8, CliError> {
    let t = io::load_table(table)?;
    let report = validate_table(&t);
    if !report.is_valid() {
        return Err(CliError {
            code: "ValidationFailed",
            message: format!("table violates {} invariant(s)", report.violations.len()),
            detail: Some(serde_json::to_value(&report.violations).expect("serializable")),
            exit: 1,
        });
    }
    let mut sd = ricci_homog::data::derive_structure(&t)?;
    sd.label = label.unwrap_or_else(|| {
        table.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    });
    match out {
        Some(path) => {
            io::save_structure(&sd, path)?;
            eprintln!("derived {} summands -> {}", sd.summand_count(), path.display());
        }
        None => println!("{}", io::structure_to_json(&sd)),
    }
    Ok(0)
}

fn cmd_bounds(structure: &Path, tensor: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let sd = io::load_structure(structure)?;
    let z = io::load_tensor(tensor)?;
    match ricci_homog::bounds::search_box(&sd, &z) {
        Ok(report) => {
            emit(&report, out)?;
            eprintln!(
                "maximal: a = {:.6e}, box = [{:.6e}, {:.6e}]",
                report.a, report.u, report.v
            );
            Ok(0)
        }
        Err(BoundsError::NotMaximal) => {
            let a = ricci_homog::bounds::maximality_constant(&sd).unwrap_or(0.0);
            let b = ricci_homog::bounds::killing_upper_bound(&sd);
            let (tau1, tau2) = ricci_homog::bounds::tau_values(&sd, &z);
            Err(CliError {
                code: "NotMaximal",
                message: "maximality constant is zero: the search box is undefined".into(),
                detail: Some(serde_json::json!({
                    "a": a, "b": b, "tau1": tau1, "tau2": tau2, "maximal": false,
                })),
                exit: 2,
            })
        }
        Err(e) => Err(e.into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    structure: &Path,
    tensor: &Path,
    opts: SolveOptions,
    out: Option<&Path>,
    record_path: Option<&Path>,
) -> Result<u8, CliError> {
    let sd = io::load_structure(structure)?;
    let z = io::load_tensor(tensor)?;
    let started = std::time::Instant::now();
    let result = solve_general(&sd, &z, &opts)?;
    let wall = started.elapsed().as_secs_f64();
    emit(&result, out)?;
    if let Some(path) = record_path {
        record::write(path, "solve", &[structure, tensor], Some(&opts), &result, wall)?;
    }
    summarize_solve(&result);
    Ok(status_exit(result.status))
}

fn cmd_solve2(
    structure: &Path,
    tensor: &Path,
    out: Option<&Path>,
    record_path: Option<&Path>,
) -> Result<u8, CliError> {
    let sd = io::load_structure(structure)?;
    let z = io::load_tensor(tensor)?;
    let started = std::time::Instant::now();
    let result = solve_two_summand(&sd, &z)?;
    let wall = started.elapsed().as_secs_f64();
    emit(&result, out)?;
    if let Some(path) = record_path {
        record::write(path, "solve2", &[structure, tensor], None, &result, wall)?;
    }
    summarize_solve(&result);
    Ok(status_exit(result.status))
}

fn cmd_check(
    structure: &Path,
    tensor: &Path,
    x: Vec<f64>,
    c: f64,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let sd = io::load_structure(structure)?;
    let z = io::load_tensor(tensor)?;
    let x = InvariantMetric::new(x)
        .map_err(|e| CliError::new("InvalidOptions", format!("--x: {e}"), 1))?;
    if x.len() != sd.summand_count() {
        return Err(CliError::new(
            "InvalidOptions",
            format!("--x has {} entries for {} summands", x.len(), sd.summand_count()),
            1,
        ));
    }
    let report = verify_solution(&sd, &z, &x, c);
    emit(&report, out)?;
    let ok = report.residual <= ricci_homog::solver::RESIDUAL_TOL;
    eprintln!(
        "residual = {:.3e}, trace = {:.6e}, S = {:.6e} -> {}",
        report.residual,
        report.trace,
        report.scalar_curvature,
        if ok { "verified" } else { "NOT verified" }
    );
    Ok(if ok { 0 } else { 3 })
}

fn cmd_scan(
    structure: &Path,
    resolution: usize,
    format: ScanFormat,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let sd = io::load_structure(structure)?;
    let rows = scan_existence(&sd, resolution)?;
    match format {
        ScanFormat::Json => emit(&rows, out)?,
        ScanFormat::Csv => {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            writer
                .write_record(["theta", "z1", "z2", "exists", "c", "ratio"])
                .and_then(|()| {
                    rows.iter().try_for_each(|row| {
                        writer.write_record(&[
                            format!("{:.16e}", row.theta),
                            format!("{:.16e}", row.z1),
                            format!("{:.16e}", row.z2),
                            row.exists.to_string(),
                            row.c.map(|v| format!("{v:.16e}")).unwrap_or_default(),
                            row.ratio.map(|v| format!("{v:.16e}")).unwrap_or_default(),
                        ])
                    })
                })
                .map_err(|e| CliError::new("Io", format!("csv: {e}"), 1))?;
            let bytes = writer
                .into_inner()
                .map_err(|e| CliError::new("Io", format!("csv: {e}"), 1))?;
            let text = String::from_utf8(bytes).expect("csv output is utf-8");
            match out {
                None => print!("{text}"),
                Some(path) => std::fs::write(path, text).map_err(|e| {
                    CliError::new("Io", format!("cannot write {}: {e}", path.display()), 1)
                })?,
            }
        }
    }
    let solvable = rows.iter().filter(|r| r.exists).count();
    eprintln!("{solvable}/{} rays solvable", rows.len());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Validate { path, out } => cmd_validate(&path, out.as_deref()),
        Command::Derive { table, label, out } => cmd_derive(&table, label, out.as_deref()),
        Command::Bounds { structure, tensor, out } => {
            cmd_bounds(&structure, &tensor, out.as_deref())
        }
        Command::Solve { structure, tensor, tol, max_iter, starts, seed, out, record } => {
            let opts = SolveOptions {
                tol,
                max_iter,
                starts,
                seed,
                threads: threads_from_env()?,
            };
            cmd_solve(&structure, &tensor, opts, out.as_deref(), record.as_deref())
        }
        Command::Solve2 { structure, tensor, out, record } => {
            cmd_solve2(&structure, &tensor, out.as_deref(), record.as_deref())
        }
        Command::Check { structure, tensor, x, c, out } => {
            cmd_check(&structure, &tensor, x, c, out.as_deref())
        }
        Command::Scan { structure, resolution, format, out } => {
            cmd_scan(&structure, resolution, format, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let mut payload = serde_json::json!({
                "error": err.code,
                "message": err.message,
            });
            if let Some(detail) = err.detail {
                payload["detail"] = detail;
            }
            eprintln!("{payload}");
            ExitCode::from(err.exit)
        }
    }
}
