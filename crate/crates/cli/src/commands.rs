//! Implementations of the `solve`, `gen`, and `bench` subcommands, with a
//! shared error type that carries the process exit code.

use std::fmt;
use std::path::Path;

use serde::Serialize;
use wpls_core::generator::{self, GenParams};
use wpls_core::io;
use wpls_core::solver::{self, Method};
use wpls_core::{LinalgError, Matrix64};

use crate::bench::{self, BenchConfig, OutputFormat, RankMode};

/// Command failure with its exit code: 2 for input problems, 3 for numeric
/// failures, 4 for generation failures.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
    Generation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Generation(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numeric(m) | CliError::Generation(m) => f.write_str(m),
        }
    }
}

fn classify(context: &str, e: LinalgError) -> CliError {
    match e {
        // NonFinite past input validation means the computation overflowed
        LinalgError::NonFinite { .. }
        | LinalgError::NotPositiveSemiDefinite { .. }
        | LinalgError::NotPositiveDefinite { .. }
        | LinalgError::ZeroDiagonal { .. }
        | LinalgError::RankZero
        | LinalgError::SvdNoConvergence { .. } => CliError::Numeric(format!("{context}: {e}")),
        LinalgError::GenerationFailed { .. } => CliError::Generation(format!("{context}: {e}")),
        _ => CliError::Input(format!("{context}: {e}")),
    }
}

/// Method selector accepted by `solve`; `auto` is the {1,2,3}-inverse route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Gi123,
    Dagger,
    Auto,
}

impl SolveMethod {
    pub fn resolve(self) -> Method {
        match self {
            SolveMethod::Gi123 | SolveMethod::Auto => Method::Gi123,
            SolveMethod::Dagger => Method::Dagger,
        }
    }
}

impl std::str::FromStr for SolveMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gi123" => Ok(SolveMethod::Gi123),
            "dagger" => Ok(SolveMethod::Dagger),
            "auto" => Ok(SolveMethod::Auto),
            other => Err(format!(
                "unknown method {other:?} (expected gi123|dagger|auto)"
            )),
        }
    }
}

fn read_input(path: &Path) -> Result<Matrix64, CliError> {
    io::read_matrix(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// `wpls solve`: reads the three problem matrices, solves with the chosen
/// method, writes the coefficients, and optionally a structured report.
pub fn cmd_solve(
    x_path: &Path,
    y_path: &Path,
    w_path: &Path,
    method: SolveMethod,
    out_path: &Path,
    report_path: Option<&Path>,
) -> Result<(), CliError> {
    let x = read_input(x_path)?;
    let y = read_input(y_path)?;
    let w = read_input(w_path)?;
    let problem = solver::WplsProblem::new(x, y, w).map_err(|e| {
        CliError::Input(format!(
            "inconsistent problem ({}, {}, {}): {e}",
            x_path.display(),
            y_path.display(),
            w_path.display()
        ))
    })?;

    let report = match method.resolve() {
        Method::Gi123 => solver::solve_123(&problem),
        Method::Dagger => solver::solve_dagger(&problem),
    }
    .map_err(|e| classify("solve failed", e))?;

    io::write_matrix(&report.c, out_path)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out_path.display())))?;

    if let Some(path) = report_path {
        #[derive(Serialize)]
        struct SolveSummary<'a> {
            method: &'a str,
            detected_rank: usize,
            e_method: f64,
            solve_seconds: f64,
        }
        let summary = SolveSummary {
            method: report.method.as_str(),
            detected_rank: report.detected_rank,
            e_method: report.e_method,
            solve_seconds: report.solve_seconds,
        };
        let text = serde_json::to_string_pretty(&summary).expect("serializable summary");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Metadata written next to generated problem files.
#[derive(Debug, Serialize)]
pub struct GenMetadata {
    pub e_exact: f64,
    pub rank: usize,
    pub kappa: f64,
    pub seed: u64,
    pub attempts_used: usize,
}

/// `wpls gen`: generates one synthetic problem with the benchmark-grid size
/// derivations and writes `X.mtx`, `Y.mtx`, `W.mtx`, and `meta.json`.
pub fn cmd_gen(
    n1: usize,
    kappa: f64,
    deficient: bool,
    seed: u64,
    out_dir: &Path,
) -> Result<(), CliError> {
    let mode = if deficient {
        RankMode::Deficient
    } else {
        RankMode::Full
    };
    let params = GenParams::new(
        n1,
        2 * n1,
        4 * n1,
        bench::BENCH_N2,
        mode.rank_for(n1),
        kappa,
        seed,
    );
    params
        .validate()
        .map_err(|e| CliError::Input(e.to_string()))?;
    if params.exceeds_practical_kappa() {
        eprintln!(
            "warning: kappa={kappa} exceeds the practical generation limit ({}); attempts may be exhausted",
            generator::KAPPA_PRACTICAL_LIMIT
        );
    }

    let generated = generator::generate::<f64>(&params).map_err(|e| classify("gen", e))?;

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", out_dir.display())))?;
    let write = |name: &str, m: &Matrix64| -> Result<(), CliError> {
        let path = out_dir.join(name);
        io::write_matrix(m, &path)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    };
    write("X.mtx", generated.problem.x())?;
    write("Y.mtx", generated.problem.y())?;
    write("W.mtx", generated.problem.w())?;

    let meta = GenMetadata {
        e_exact: generated.e_exact,
        rank: generated.true_rank,
        kappa,
        seed,
        attempts_used: generated.attempts_used,
    };
    let path = out_dir.join("meta.json");
    let text = serde_json::to_string_pretty(&meta).expect("serializable metadata");
    std::fs::write(&path, text + "\n")
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// `wpls bench`: runs the grid, writes records in the requested format, and
/// prints the per-cell summary to stdout (failures also go to stderr).
pub fn cmd_bench(
    config: &BenchConfig,
    format: OutputFormat,
    out_path: &Path,
) -> Result<(), CliError> {
    let outcome = bench::run_bench(config).map_err(CliError::Input)?;

    let text = match format {
        OutputFormat::Csv => bench::to_csv(&outcome.records),
        OutputFormat::Json => {
            serde_json::to_string_pretty(&outcome.records).expect("serializable records") + "\n"
        }
    };
    std::fs::write(out_path, text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out_path.display())))?;

    print!(
        "{}",
        bench::render_summary(&bench::summarize(&outcome.records), &outcome.failures)
    );
    for f in &outcome.failures {
        eprintln!(
            "generation failed: n1={} kappa={} {} trial {}: {}",
            f.n1, f.kappa, f.rank_mode, f.trial, f.error
        );
    }
    Ok(())
}

/// Parses a comma-separated list for the bench flags.
pub fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| CliError::Input(format!("bad {what} entry: {tok:?}")))
        })
        .collect()
}
