//! `ncindex` — runs one command and writes `report.json`, `timings.json` and `sweeps/*.csv`
//! into the output directory. Exit code 0 iff every verdict passes, 1 if some verdict
//! fails, 2 on configuration or runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ncindex::cli_reports::{run, Command, RunConfig, RunOptions};

#[derive(Parser)]
#[command(name = "ncindex", version, about = "Numerical index verification for operators with shifts on the 3-torus")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// TOML run configuration (defaults are used when omitted).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "ncindex-out")]
    out: PathBuf,
    /// Overrides the configuration seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Exact checks of the operation ψ in the λ-ring.
    Psi,
    /// Analytic, topological and oracle index estimates with the invertibility surrogate.
    Index,
    /// Convergence tables in the window radius and grid resolution.
    Sweep,
    /// Ellipticity certificates of the example symbols.
    Certify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Psi => Command::Psi,
        Cmd::Index => Command::Index,
        Cmd::Sweep => Command::Sweep,
        Cmd::Certify => Command::Certify,
    };
    let config = match &cli.config {
        Some(path) => RunConfig::from_path(path),
        None => Ok(RunConfig::default()),
    };
    let options = RunOptions {
        out_dir: cli.out.clone(),
        seed: cli.seed,
        threads: cli.threads,
    };
    let outcome = match config.and_then(|c| run(command, c, &options)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("ncindex {}: {e}", command.name());
            return ExitCode::from(2);
        }
    };
    for v in &outcome.report.verdicts {
        println!("{} {} (measured {:e})", if v.passed { "PASS" } else { "FAIL" }, v.name, v.measured);
    }
    for stage in &outcome.report.stages {
        if let Some(items) = stage.result.as_array() {
            for item in items {
                if let Some(diff) = item.get("diff").and_then(|d| d.as_array()).filter(|d| !d.is_empty()) {
                    eprintln!("dimension {}: expansion differs from the expected terms:", item["dim"]);
                    for d in diff {
                        eprintln!("  {d}");
                    }
                }
            }
        }
    }
    for path in &outcome.written {
        println!("wrote {}", path.display());
    }
    if outcome.report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
