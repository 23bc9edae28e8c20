//! Machine-readable run reports and CSV curve output.
//!
//! Reports are reproducible byte-for-byte under identical configuration:
//! they carry no timestamps and no filesystem paths, and every number in
//! them derives from seeded sampling.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::ResolvedConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One verified claim: its name, the identity or inequality it checks
/// (the anchor), the outcome, the observed margin and, when available, an
/// extremal or violating witness.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    pub anchor: &'static str,
    pub status: Status,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub config: ResolvedConfig,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl RunReport {
    pub fn new(config: ResolvedConfig, checks: Vec<CheckRecord>) -> Self {
        RunReport {
            suite: config.suite.to_string(),
            seed: config.seed,
            passed: checks.iter().all(|c| c.status == Status::Pass),
            config,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// A curve destined for one CSV file.
#[derive(Debug, Clone)]
pub struct Curve {
    /// File name (no directory), e.g. `blowup_ratios.csv`.
    pub file_name: String,
    /// Header row, e.g. `delta,omega`.
    pub header: &'static str,
    pub rows: Vec<Vec<f64>>,
}

/// Plain decimal with 12 significant digits.
pub fn decimal12(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000000".into();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Write each curve as `<dir>/<file_name>` with a header row.
pub fn emit_curves(curves: &[Curve], dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for curve in curves {
        let path = dir.join(&curve.file_name);
        let mut file = std::fs::File::create(&path)?;
        writeln!(file, "{}", curve.header)?;
        for row in &curve.rows {
            let cells: Vec<String> = row.iter().map(|v| decimal12(*v)).collect();
            writeln!(file, "{}", cells.join(","))?;
        }
        written.push(path);
    }
    Ok(written)
}
