//! Replayable run records: input digests, options, result, timing.

use crate::CliError;
use ricci_homog::io;
use ricci_homog::solver::{SolveOptions, SolveResult};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Serialize)]
struct OptionsRecord {
    tol: f64,
    max_iter: u64,
    starts: u32,
    seed: u64,
    threads: usize,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    command: &'a str,
    /// SHA-256 digests of the input files, in argument order.
    input_digests: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    options: Option<OptionsRecord>,
    result: &'a SolveResult,
    wall_time_seconds: f64,
    version: &'a str,
}

fn digest(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::new("Io", format!("cannot read {}: {e}", path.display()), 1))?;
    let hash = Sha256::digest(&bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    Ok(format!("sha256:{hex}"))
}

pub fn write(
    path: &Path,
    command: &str,
    inputs: &[&Path],
    options: Option<&SolveOptions>,
    result: &SolveResult,
    wall_time_seconds: f64,
) -> Result<(), CliError> {
    let record = RunRecord {
        command,
        input_digests: inputs.iter().map(|p| digest(p)).collect::<Result<_, _>>()?,
        options: options.map(|o| OptionsRecord {
            tol: o.tol,
            max_iter: o.max_iter,
            starts: o.starts,
            seed: o.seed,
            threads: o.threads,
        }),
        result,
        wall_time_seconds,
        version: env!("CARGO_PKG_VERSION"),
    };
    std::fs::write(path, io::to_json_pretty(&record) + "\n")
        .map_err(|e| CliError::new("Io", format!("cannot write {}: {e}", path.display()), 1))
}
