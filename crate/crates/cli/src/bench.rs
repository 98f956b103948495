//! Benchmark harness: generates problem cells over a (size, conditioning,
//! rank mode) grid, times both solvers on each trial, and aggregates
//! per-cell means of solve time and relative accuracy.

use std::fmt;

use serde::{Deserialize, Serialize};
use wpls_core::generator::{generate, GenParams};
use wpls_core::rng::SplitMix64;
use wpls_core::solver::{self, Method, WplsProblem};

/// Number of target columns used throughout the benchmark grid.
pub const BENCH_N2: usize = 32;

/// Full-rank or rank-deficient problem configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMode {
    Full,
    Deficient,
}

impl RankMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RankMode::Full => "full",
            RankMode::Deficient => "deficient",
        }
    }

    /// Planted rank for a given coefficient count: `n1` when full,
    /// `ceil(7 n1 / 8)` when deficient.
    pub fn rank_for(self, n1: usize) -> usize {
        match self {
            RankMode::Full => n1,
            RankMode::Deficient => (7 * n1).div_ceil(8),
        }
    }
}

impl std::str::FromStr for RankMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(RankMode::Full),
            "deficient" => Ok(RankMode::Deficient),
            other => Err(format!(
                "unknown rank mode {other:?} (expected full|deficient)"
            )),
        }
    }
}

impl fmt::Display for RankMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Output format for benchmark records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv|json)")),
        }
    }
}

/// Benchmark grid configuration. Derived sizes follow the reference grid:
/// `m1 = 2 n1`, `m2 = 2 m1`, `n2 = 32`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub n1_list: Vec<usize>,
    pub kappa_list: Vec<f64>,
    pub rank_modes: Vec<RankMode>,
    pub trials: usize,
    pub n2: usize,
    pub seed: u64,
}

impl BenchConfig {
    pub fn new(n1_list: Vec<usize>, kappa_list: Vec<f64>, trials: usize, seed: u64) -> Self {
        Self {
            n1_list,
            kappa_list,
            rank_modes: vec![RankMode::Full, RankMode::Deficient],
            trials,
            n2: BENCH_N2,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n1_list.is_empty() || self.kappa_list.is_empty() || self.rank_modes.is_empty() {
            return Err("n1 list, kappa list, and rank modes must be non-empty".into());
        }
        if self.trials == 0 {
            return Err("trials must be positive".into());
        }
        for &n1 in &self.n1_list {
            if n1 < 2 {
                return Err(format!("n1 must be at least 2, got {n1}"));
            }
        }
        for &kappa in &self.kappa_list {
            if !kappa.is_finite() || kappa < 1.0 {
                return Err(format!("kappa must be finite and >= 1, got {kappa}"));
            }
        }
        Ok(())
    }

    /// Generator parameters for one cell and trial.
    pub fn cell_params(&self, n1: usize, kappa: f64, mode: RankMode, trial: usize) -> GenParams {
        let m1 = 2 * n1;
        let m2 = 2 * m1;
        GenParams::new(
            n1,
            m1,
            m2,
            self.n2,
            mode.rank_for(n1),
            kappa,
            trial_seed(self.seed, n1, kappa, mode, trial),
        )
    }
}

/// Derives the per-trial generator seed from the grid coordinates, so runs
/// are reproducible regardless of cell iteration order.
pub fn trial_seed(base: u64, n1: usize, kappa: f64, mode: RankMode, trial: usize) -> u64 {
    let mut state = base;
    for word in [n1 as u64, kappa.to_bits(), mode as u64, trial as u64] {
        state = SplitMix64::new(state ^ word).next_u64();
    }
    state
}

/// One timed solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: String,
    pub n1: usize,
    pub kappa: f64,
    pub rank_mode: RankMode,
    pub trial: usize,
    pub solve_seconds: f64,
    pub rel_accuracy: f64,
    pub detected_rank: usize,
    pub attempts_used: usize,
}

/// A generation attempt that exhausted its budget; kept alongside the
/// records so failed cells are visible in the output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchFailure {
    pub n1: usize,
    pub kappa: f64,
    pub rank_mode: RankMode,
    pub trial: usize,
    pub error: String,
}

#[derive(Debug, Clone, Default)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub failures: Vec<BenchFailure>,
}

/// Runs the full grid. All timed solves happen sequentially on this thread;
/// each cell gets one untimed warm-up solve per method before its recorded
/// trials. Within a (size, conditioning) pair the rank modes alternate trial
/// by trial, so the full/deficient timing comparison never straddles a long
/// stretch of wall-clock drift. Generation failures are recorded and the
/// trial skipped.
pub fn run_bench(config: &BenchConfig) -> Result<BenchOutcome, String> {
    config.validate()?;
    let mut outcome = BenchOutcome::default();
    for &n1 in &config.n1_list {
        for &kappa in &config.kappa_list {
            for trial in 0..config.trials {
                for &mode in &config.rank_modes {
                    run_trial(config, n1, kappa, mode, trial, &mut outcome);
                }
            }
        }
    }
    Ok(outcome)
}

fn run_trial(
    config: &BenchConfig,
    n1: usize,
    kappa: f64,
    mode: RankMode,
    trial: usize,
    outcome: &mut BenchOutcome,
) {
    let params = config.cell_params(n1, kappa, mode, trial);
    let generated = match generate::<f64>(&params) {
        Ok(g) => g,
        Err(e) => {
            outcome.failures.push(BenchFailure {
                n1,
                kappa,
                rank_mode: mode,
                trial,
                error: e.to_string(),
            });
            return;
        }
    };
    // warm-up solves, excluded from the records: generating the problem just
    // churned through buffers larger than the problem itself, and recorded
    // timings taken straight after it land in the cold tail
    let _ = solver::solve_123(&generated.problem);
    let _ = solver::solve_dagger(&generated.problem);
    for method in [Method::Gi123, Method::Dagger] {
        match timed_solve(&generated.problem, method) {
            Ok((solve_seconds, e_method, detected_rank)) => {
                outcome.records.push(BenchRecord {
                    method: method.as_str().to_string(),
                    n1,
                    kappa,
                    rank_mode: mode,
                    trial,
                    solve_seconds,
                    rel_accuracy: (e_method - generated.e_exact) / generated.e_exact,
                    detected_rank,
                    attempts_used: generated.attempts_used,
                });
            }
            Err(e) => outcome.failures.push(BenchFailure {
                n1,
                kappa,
                rank_mode: mode,
                trial,
                error: format!("{method}: {e}"),
            }),
        }
    }
}

fn timed_solve(
    problem: &WplsProblem<f64>,
    method: Method,
) -> Result<(f64, f64, usize), wpls_core::LinalgError> {
    let report = match method {
        Method::Gi123 => solver::solve_123(problem)?,
        Method::Dagger => solver::solve_dagger(problem)?,
    };
    Ok((report.solve_seconds, report.e_method, report.detected_rank))
}

/// CSV header matching [`BenchRecord`] field order.
pub const CSV_HEADER: &str =
    "method,n1,kappa,rank_mode,trial,solve_seconds,rel_accuracy,detected_rank,attempts_used";

/// Renders records as CSV with a header row. Floats use the shortest
/// round-trip representation, so parsing recovers them exactly.
pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.method,
            r.n1,
            r.kappa,
            r.rank_mode,
            r.trial,
            r.solve_seconds,
            r.rel_accuracy,
            r.detected_rank,
            r.attempts_used
        ));
    }
    out
}

/// Parses CSV produced by [`to_csv`].
pub fn from_csv(text: &str) -> Result<Vec<BenchRecord>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => return Err(format!("bad CSV header: {other:?}")),
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(format!(
                "line {}: expected 9 fields, got {}",
                idx + 2,
                fields.len()
            ));
        }
        let parse = |what: &str, s: &str| -> Result<f64, String> {
            s.parse()
                .map_err(|_| format!("line {}: bad {what}: {s:?}", idx + 2))
        };
        records.push(BenchRecord {
            method: fields[0].to_string(),
            n1: fields[1]
                .parse()
                .map_err(|_| format!("line {}: bad n1", idx + 2))?,
            kappa: parse("kappa", fields[2])?,
            rank_mode: fields[3].parse()?,
            trial: fields[4]
                .parse()
                .map_err(|_| format!("line {}: bad trial", idx + 2))?,
            solve_seconds: parse("solve_seconds", fields[5])?,
            rel_accuracy: parse("rel_accuracy", fields[6])?,
            detected_rank: fields[7]
                .parse()
                .map_err(|_| format!("line {}: bad detected_rank", idx + 2))?,
            attempts_used: fields[8]
                .parse()
                .map_err(|_| format!("line {}: bad attempts_used", idx + 2))?,
        });
    }
    Ok(records)
}

/// Per-cell aggregate over one method.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub method: String,
    pub n1: usize,
    pub kappa: f64,
    pub rank_mode: RankMode,
    pub trials: usize,
    pub mean_solve_ms: f64,
    pub mean_rel_accuracy: f64,
}

/// Means per (method, n1, kappa, rank mode) cell, in first-seen order.
pub fn summarize(records: &[BenchRecord]) -> Vec<CellSummary> {
    let mut cells: Vec<CellSummary> = Vec::new();
    for r in records {
        let found = cells.iter_mut().find(|c| {
            c.method == r.method && c.n1 == r.n1 && c.kappa == r.kappa && c.rank_mode == r.rank_mode
        });
        match found {
            Some(cell) => {
                cell.trials += 1;
                cell.mean_solve_ms += r.solve_seconds * 1e3;
                cell.mean_rel_accuracy += r.rel_accuracy;
            }
            None => cells.push(CellSummary {
                method: r.method.clone(),
                n1: r.n1,
                kappa: r.kappa,
                rank_mode: r.rank_mode,
                trials: 1,
                mean_solve_ms: r.solve_seconds * 1e3,
                mean_rel_accuracy: r.rel_accuracy,
            }),
        }
    }
    for cell in &mut cells {
        cell.mean_solve_ms /= cell.trials as f64;
        cell.mean_rel_accuracy /= cell.trials as f64;
    }
    cells
}

/// Renders the two mean tables (solve time, relative accuracy) with one row
/// per method under each rank mode and one column per (n1, kappa) pair.
pub fn render_summary(cells: &[CellSummary], failures: &[BenchFailure]) -> String {
    let mut columns: Vec<(usize, f64)> = Vec::new();
    for c in cells {
        if !columns.contains(&(c.n1, c.kappa)) {
            columns.push((c.n1, c.kappa));
        }
    }
    let mut modes: Vec<RankMode> = Vec::new();
    for c in cells {
        if !modes.contains(&c.rank_mode) {
            modes.push(c.rank_mode);
        }
    }
    let methods = ["gi123", "dagger"];

    let lookup = |method: &str, n1: usize, kappa: f64, mode: RankMode| {
        cells
            .iter()
            .find(|c| c.method == method && c.n1 == n1 && c.kappa == kappa && c.rank_mode == mode)
    };

    let mut out = String::new();
    for (title, pick) in [
        (
            "mean solve time (ms)",
            (|c: &CellSummary| c.mean_solve_ms) as fn(&CellSummary) -> f64,
        ),
        ("mean relative accuracy", |c: &CellSummary| {
            c.mean_rel_accuracy
        }),
    ] {
        out.push_str(title);
        out.push('\n');
        out.push_str(&format!("{:<12}", "method"));
        for &(n1, kappa) in &columns {
            out.push_str(&format!("{:>16}", format!("n1={n1} k={kappa}")));
        }
        out.push('\n');
        for &mode in &modes {
            out.push_str(&format!("[{mode} rank]\n"));
            for method in methods {
                out.push_str(&format!("{method:<12}"));
                for &(n1, kappa) in &columns {
                    match lookup(method, n1, kappa, mode) {
                        Some(cell) => out.push_str(&format!("{:>16.3e}", pick(cell))),
                        None => out.push_str(&format!("{:>16}", "-")),
                    }
                }
                out.push('\n');
            }
        }
        out.push('\n');
    }
    if !failures.is_empty() {
        out.push_str(&format!("{} generation failure(s):\n", failures.len()));
        for f in failures {
            out.push_str(&format!(
                "  n1={} kappa={} {} trial {}: {}\n",
                f.n1, f.kappa, f.rank_mode, f.trial, f.error
            ));
        }
    }
    out
}
