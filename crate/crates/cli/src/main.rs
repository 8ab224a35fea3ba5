mod config;
mod experiments;
mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "lab", version, about = "Run coarse-geometry and random-walk experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a TOML config.
    Run {
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "LAB_WORKERS")]
        workers: Option<usize>,
        /// Output directory; defaults to the config's `output`, then `lab-out`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in invariant suite.
    Verify {
        #[arg(long, env = "LAB_WORKERS")]
        workers: Option<usize>,
        /// Also write each run's CSV and manifest under this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn init_workers(workers: Option<usize>) -> Result<usize, String> {
    match workers {
        Some(0) => Err("workers must be positive".into()),
        Some(k) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
                .map_err(|e| e.to_string())?;
            Ok(k)
        }
        None => Ok(rayon::current_num_threads()),
    }
}

fn print_invariants(label: &str, outcome: &experiments::Outcome) -> bool {
    let mut ok = true;
    for inv in &outcome.invariants {
        ok &= inv.holds;
        let status = if inv.holds { "PASS" } else { "FAIL" };
        println!("{status} {label} {} [{}] {}", inv.name, inv.evidence, inv.detail);
    }
    ok
}

fn run_one(cfg: &ExperimentConfig, label: &str, out: Option<&Path>, workers: usize) -> Result<bool, String> {
    let mut outcome = experiments::run(cfg).map_err(|e| e.to_string())?;
    report::finalize(&mut outcome);
    if let Some(dir) = out {
        let written = report::write(dir, cfg, &outcome, workers).map_err(|e| e.to_string())?;
        println!("wrote {} and {}", written.csv.display(), written.manifest.display());
    }
    Ok(print_invariants(label, &outcome))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            workers,
            out,
        } => (|| {
            let mut cfg = ExperimentConfig::load(&config).map_err(|e| e.to_string())?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let workers = init_workers(workers)?;
            let dir = out
                .or_else(|| cfg.output.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("lab-out"));
            run_one(&cfg, cfg.kind.name(), Some(&dir), workers)
        })(),
        Command::Verify { workers, out } => (|| {
            let workers = init_workers(workers)?;
            let mut all = true;
            for (name, text) in verify::SUITE {
                let cfg = ExperimentConfig::from_toml(text).map_err(|e| format!("{name}: {e}"))?;
                let dir = out.as_ref().map(|d| d.join(name));
                all &= run_one(&cfg, name, dir.as_deref(), workers).map_err(|e| format!("{name}: {e}"))?;
            }
            Ok(all)
        })(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some invariants failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
