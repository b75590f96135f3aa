use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use tracerule::report::CheckReport;

/// Sampling grid a verdict was evaluated on.
#[derive(Clone, Debug, Serialize)]
pub struct GridMeta {
    pub description: String,
    pub points: usize,
}

impl GridMeta {
    pub fn new(description: impl Into<String>, points: usize) -> Self {
        GridMeta {
            description: description.into(),
            points,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    /// Where the worst residual occurred, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<String>,
    pub grid: GridMeta,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64, grid: GridMeta) -> Self {
        Check {
            name: name.into(),
            passed: residual <= tolerance,
            residual,
            tolerance,
            worst: None,
            grid,
        }
    }

    pub fn from_report(r: &CheckReport, grid: &str) -> Self {
        Check {
            name: r.check.clone(),
            passed: r.passed,
            residual: r.max_violation,
            tolerance: r.tolerance,
            worst: r.worst.clone(),
            grid: GridMeta::new(grid, r.grid_points),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: Value,
    /// Conjunction of all checks; absent for commands that only compute.
    pub verdict: Option<bool>,
    pub checks: Vec<Check>,
    pub results: Value,
}

impl Report {
    pub fn new(command: &str, seed: u64, config: Value) -> Self {
        Report {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            config,
            verdict: None,
            checks: Vec::new(),
            results: Value::Null,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.verdict = Some(self.verdict.unwrap_or(true) && c.passed);
        self.checks.push(c);
    }

    pub fn results<T: Serialize>(&mut self, r: &T) -> Result<()> {
        self.results = serde_json::to_value(r)?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write to {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Report to `path`, or to stdout.
pub fn emit(report: &Report, path: Option<&Path>) -> Result<()> {
    let bytes = report.to_bytes()?;
    match path {
        Some(p) => write_atomic(p, &bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
