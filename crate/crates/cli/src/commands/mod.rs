mod bb84;
mod bell;
mod check;
mod holevo;
mod model;

use std::cell::Cell;
use std::fmt;
use std::path::PathBuf;

use anyhow::{bail, Result};

pub use bb84::{bb84_attack, bb84_envelop};
pub use bell::{bell_max, bell_orbit, bell_scan};
pub use check::{check_marginals, check_nosignal, check_reach};
pub use holevo::holevo;
pub use model::{canonical_build, levelset_probe, model_validate, ppm_distance, ppm_envelop, ppm_generate, split_build};

use crate::output::{write_atomic, Report};

pub struct Ctx {
    pub command: &'static str,
    pub seed: u64,
    pub csv: Option<PathBuf>,
    pub config: serde_json::Value,
    /// Set when a command streamed data to stdout, which then cannot carry
    /// the report too.
    pub stdout_taken: Cell<bool>,
}

impl Ctx {
    pub fn report(&self) -> Report {
        Report::new(self.command, self.seed, self.config.clone())
    }

    pub fn write_csv(&self, f: impl FnOnce(&mut Vec<u8>) -> tracerule::Result<()>) -> Result<()> {
        if let Some(path) = &self.csv {
            let mut buf = Vec::new();
            f(&mut buf)?;
            write_atomic(path, &buf)?;
        }
        Ok(())
    }
}

/// Input rejected after its report was assembled; the report is still
/// written, and the process exits with the error code.
#[derive(Debug)]
pub struct Rejected {
    pub report: Box<Report>,
    pub message: String,
}

impl fmt::Display for Rejected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Rejected {}

pub fn require_res(name: &str, v: usize) -> Result<()> {
    if v < 2 {
        bail!("--{name} must be at least 2, got {v}");
    }
    Ok(())
}

pub fn require_tol(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        bail!("--{name} must be a positive number, got {v}");
    }
    Ok(())
}

pub fn require_positive(name: &str, v: f64) -> Result<()> {
    require_tol(name, v)
}
