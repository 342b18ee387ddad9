use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qfibounds_core::bounds::SampleError;
use qfibounds_core::report::{write_csv, Summary};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, Format};
use crate::error::{HarnessError, Result};
use crate::experiments::{execute, ExperimentOutput};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: &'static str,
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub total_errors: usize,
    pub wall_time_seconds: f64,
    /// sha256 of every written file except the manifest, keyed by file name.
    pub files: BTreeMap<String, String>,
    pub errors: Vec<SampleError>,
    pub notes: Vec<String>,
}

impl RunManifest {
    /// True when the run had no violations and no errors.
    pub fn is_clean(&self) -> bool {
        self.summary.total_violations == 0 && self.total_errors == 0
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write(dir: &Path, name: &str, bytes: &[u8], files: &mut BTreeMap<String, String>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| HarnessError::io(path, e))?;
    files.insert(name.to_string(), sha256_hex(bytes));
    Ok(())
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialize");
    v.push(b'\n');
    v
}

/// Writes reports, summary and tables into `dir`; returns file checksums.
pub fn write_outputs(dir: &Path, format: Format, out: &ExperimentOutput, summary: &Summary) -> Result<BTreeMap<String, String>> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut files = BTreeMap::new();
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &out.rows).map_err(|e| HarnessError::io(dir.join("reports.csv"), e))?;
            write(dir, "reports.csv", &buf, &mut files)?;
            for t in &out.tables {
                write(dir, &format!("{}.csv", t.name), t.to_csv().as_bytes(), &mut files)?;
            }
        }
        Format::Json => {
            write(dir, "reports.json", &json_bytes(&out.rows), &mut files)?;
            for t in &out.tables {
                write(dir, &format!("{}.json", t.name), &json_bytes(&t.to_json()), &mut files)?;
            }
        }
    }
    write(dir, "summary.json", &json_bytes(summary), &mut files)?;
    Ok(files)
}

/// Runs the configured experiment and writes everything under `output_dir`.
pub fn run(cfg: &ExperimentConfig) -> Result<(RunManifest, ExperimentOutput)> {
    let start = Instant::now();
    let out = execute(cfg)?;
    let summary = Summary::from_rows(&out.rows, &out.expected);
    let files = write_outputs(&cfg.output_dir, cfg.format, &out, &summary)?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment: cfg.experiment.as_str(),
        config: cfg.clone(),
        summary,
        total_errors: out.errors.len(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        files,
        errors: out.errors.clone(),
        notes: out.notes.clone(),
    };
    let path: PathBuf = cfg.output_dir.join(MANIFEST_FILE);
    std::fs::write(&path, json_bytes(&manifest)).map_err(|e| HarnessError::io(path, e))?;
    Ok((manifest, out))
}
