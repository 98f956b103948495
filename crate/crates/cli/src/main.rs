use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wpls_cli::bench::{BenchConfig, OutputFormat, RankMode};
use wpls_cli::commands::{self, CliError, SolveMethod};

/// Weighted pairing least-squares toolkit: solve problems from files,
/// generate synthetic test problems, and benchmark the two solvers.
#[derive(Parser)]
#[command(name = "wpls", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem given as three Matrix Market files.
    Solve {
        /// Data matrix X (m1 x n1).
        #[arg(long)]
        x: PathBuf,
        /// Target matrix Y (m2 x n2).
        #[arg(long)]
        y: PathBuf,
        /// Non-negative pairing weights W (m1 x m2).
        #[arg(long)]
        w: PathBuf,
        /// gi123, dagger, or auto (auto picks gi123).
        #[arg(long, default_value = "auto")]
        method: SolveMethod,
        /// Output path for the coefficient matrix C.
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON report (method, detected_rank, e_method, solve_seconds).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate a synthetic problem with known exact minimum.
    Gen {
        /// Coefficient count n1; the grid derives m1 = 2 n1, m2 = 4 n1, n2 = 32.
        #[arg(long)]
        n1: usize,
        /// Eigenvalue spread of the Gram matrix (>= 1).
        #[arg(long)]
        kappa: f64,
        /// Plant rank ceil(7 n1 / 8) instead of full rank.
        #[arg(long)]
        deficient: bool,
        /// Generator seed; fixed seeds reproduce files byte for byte.
        #[arg(long)]
        seed: u64,
        /// Directory for X.mtx, Y.mtx, W.mtx, and meta.json.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run the benchmark grid and write per-solve records.
    Bench {
        /// Comma-separated list of coefficient counts.
        #[arg(long)]
        n1: String,
        /// Comma-separated list of eigenvalue spreads.
        #[arg(long)]
        kappa: String,
        /// Trials per grid cell.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Base seed; per-trial seeds derive from it deterministically.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record format: csv or json.
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
        /// Output path for the records.
        #[arg(long)]
        out: PathBuf,
        /// Rank modes to run (full,deficient).
        #[arg(long, default_value = "full,deficient")]
        rank_modes: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            x,
            y,
            w,
            method,
            out,
            report,
        } => commands::cmd_solve(&x, &y, &w, method, &out, report.as_deref()),
        Command::Gen {
            n1,
            kappa,
            deficient,
            seed,
            out_dir,
        } => commands::cmd_gen(n1, kappa, deficient, seed, &out_dir),
        Command::Bench {
            n1,
            kappa,
            trials,
            seed,
            format,
            out,
            rank_modes,
        } => {
            let mut config = BenchConfig::new(
                commands::parse_list(&n1, "n1")?,
                commands::parse_list(&kappa, "kappa")?,
                trials,
                seed,
            );
            config.rank_modes = commands::parse_list::<RankMode>(&rank_modes, "rank mode")?;
            commands::cmd_bench(&config, format, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
