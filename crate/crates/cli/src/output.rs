//! Text artifacts of a run: diagnostics table, snapshot grids, manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hyperac_core::solver::{Snapshot, StepDiagnostics};
use serde::Serialize;

use crate::config::RunSpec;

pub const DIAGNOSTICS_HEADER: &str =
    "n,time,uniform_norm,discrete_energy,continuous_energy,envelope,l2_norm";

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // Python and most CSV readers accept these spellings.
        if x.is_nan() {
            "NaN"
        } else if x > 0.0 {
            "inf"
        } else {
            "-inf"
        }
        .to_string()
    }
}

pub fn diagnostics_csv(rows: &[StepDiagnostics]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 160);
    out.push_str(DIAGNOSTICS_HEADER);
    out.push('\n');
    for d in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            d.n,
            num(d.time),
            num(d.uniform_norm),
            num(d.discrete_energy),
            num(d.continuous_energy),
            num(d.envelope.unwrap_or(f64::NAN)),
            num(d.l2_norm),
        );
    }
    out
}

pub fn snapshot_text(s: &Snapshot) -> String {
    let mut out = String::with_capacity(s.values.len() * 24 + 64);
    let _ = writeln!(
        out,
        "# t={} nlat={} nlon={}",
        s.time, s.grid.nlat, s.grid.nlon
    );
    for row in s.values.chunks(s.grid.nlon) {
        let line: Vec<String> = row.iter().map(|v| num(*v)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn snapshot_name(n: usize) -> String {
    format!("snapshot_{n:06}.txt")
}

#[derive(Debug, Serialize)]
pub struct RulesUsed {
    pub evolution: String,
    pub evolution_points: usize,
    pub init: Option<String>,
    pub init_points: Option<usize>,
    pub energy: String,
}

#[derive(Debug, Serialize)]
pub struct Artifacts {
    pub diagnostics: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub version: String,
    pub config_file: PathBuf,
    pub config: &'a RunSpec,
    pub rules: RulesUsed,
    pub alpha0_used: f64,
    pub status: &'static str,
    pub blow_up_step: Option<usize>,
    pub rows: usize,
    pub artifacts: Artifacts,
    pub duration_seconds: f64,
}

pub fn version_string() -> String {
    format!("hyperac {}", env!("CARGO_PKG_VERSION"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
