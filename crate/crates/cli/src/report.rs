//! CSV tables and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use hyplab::{LabError, Result};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::experiments::{constant_table_check, Outcome};

pub struct Written {
    pub csv: PathBuf,
    pub manifest: PathBuf,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> LabError {
    LabError::rejected(format!("{}: {e}", path.display()))
}

pub fn csv_bytes(hash: &str, outcome: &Outcome) -> Result<Vec<u8>> {
    let mut buf = format!("# config-sha256={hash}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let fail = |e: csv::Error| LabError::rejected(format!("csv: {e}"));
        w.write_record(&outcome.header).map_err(fail)?;
        for row in &outcome.rows {
            w.write_record(row).map_err(fail)?;
        }
        w.flush().map_err(|e| LabError::rejected(format!("csv: {e}")))?;
    }
    Ok(buf)
}

/// Adds the constant-table check to the outcome's invariants.
pub fn finalize(outcome: &mut Outcome) {
    if let Some(t) = &outcome.constants {
        outcome.invariants.push(constant_table_check(t));
    }
}

pub fn manifest(cfg: &ExperimentConfig, outcome: &Outcome, workers: usize, csv_name: &str) -> serde_json::Value {
    json!({
        "kind": cfg.kind.name(),
        "backend": cfg.backend,
        "config_hash": cfg.hash(),
        "seed": cfg.seed,
        "workers": workers,
        "versions": {
            "lab": env!("CARGO_PKG_VERSION"),
            "hyplab-core": hyplab::VERSION,
        },
        "walk": outcome.walk,
        "config": cfg,
        "constants": outcome.constants,
        "certificate_levels": outcome.certificates,
        "invariants": outcome.invariants,
        "passed": outcome.invariants.iter().all(|i| i.holds),
        "csv": csv_name,
    })
}

pub fn write(dir: &Path, cfg: &ExperimentConfig, outcome: &Outcome, workers: usize) -> Result<Written> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let stem = cfg.kind.name();
    let csv_name = format!("{stem}.csv");
    let csv = dir.join(&csv_name);
    std::fs::write(&csv, csv_bytes(&cfg.hash(), outcome)?).map_err(|e| io_err(&csv, e))?;
    let manifest_path = dir.join(format!("{stem}.manifest.json"));
    let mut file = std::fs::File::create(&manifest_path).map_err(|e| io_err(&manifest_path, e))?;
    let text = serde_json::to_string_pretty(&manifest(cfg, outcome, workers, &csv_name)).expect("manifest serializes");
    writeln!(file, "{text}").map_err(|e| io_err(&manifest_path, e))?;
    Ok(Written {
        csv,
        manifest: manifest_path,
    })
}
