//! `lattice-lab`: run verification suites over the function-lattice
//! laboratory and emit machine-readable reports.
//!
//! Exit codes: 0 all checks pass, 1 verification failure, 2 usage error,
//! 3 I/O error.

mod config;
mod registry;
mod report;
mod runner;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, ResolvedConfig, Suite};
use registry::REGISTRY;
use report::emit_curves;
use runner::run_suite;

const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "lattice-lab", version, about = "Function-lattice verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write report.json plus curve CSVs.
    Run {
        /// Suite to run; overrides the config file.
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// JSON config file; LATTICE_LAB_CONFIG sets the default path.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default `out`, or the config's out_dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the registry of checks with the identities they verify.
    List,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for def in REGISTRY {
                println!("{:32} [{}] {}", def.name, def.suite, def.anchor);
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            suite,
            config,
            seed,
            out,
        } => run_command(suite, config, seed, out),
    }
}

fn run_command(
    suite_flag: Option<Suite>,
    config_flag: Option<PathBuf>,
    seed_flag: Option<u64>,
    out_flag: Option<PathBuf>,
) -> ExitCode {
    let config_path = config_flag.or_else(|| std::env::var_os("LATTICE_LAB_CONFIG").map(Into::into));
    let file_config = match load_config(config_path.as_deref()) {
        Ok(c) => c,
        Err(message) => {
            eprintln!("lattice-lab: {message}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let suite = match suite_flag.or(file_config.suite) {
        Some(s) => s,
        None => {
            eprintln!("lattice-lab: no suite selected (pass --suite or set it in the config)");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mut file_config = file_config;
    if let Some(seed) = seed_flag {
        file_config.seed = Some(seed);
    }
    let resolved = match ResolvedConfig::resolve(&file_config, suite) {
        Ok(r) => r,
        Err(message) => {
            eprintln!("lattice-lab: invalid config: {message}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let out_dir = out_flag
        .or(file_config.out_dir)
        .unwrap_or_else(|| PathBuf::from("out"));

    let started = Instant::now();
    let run = run_suite(&resolved);
    eprintln!(
        "lattice-lab: suite `{}`: {}/{} checks passed in {:.2}s",
        resolved.suite,
        run.report
            .checks
            .iter()
            .filter(|c| c.status == report::Status::Pass)
            .count(),
        run.report.checks.len(),
        started.elapsed().as_secs_f64()
    );

    if let Err(err) = write_outputs(&run, &out_dir) {
        eprintln!("lattice-lab: cannot write outputs under {}: {err}", out_dir.display());
        return ExitCode::from(EXIT_IO);
    }

    if run.report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILURE)
    }
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig, String> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let body = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&body).map_err(|e| format!("cannot parse config {}: {e}", path.display()))
}

fn write_outputs(run: &runner::SuiteRun, out_dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("report.json"), run.report.to_json())?;
    emit_curves(&run.curves, out_dir)?;
    Ok(())
}
