//! Grid-based check results and their CSV export.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measure::ParamPoint;

/// One sampled point of a check with the violation measured there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub point: ParamPoint,
    pub violation: f64,
}

/// Outcome of a property check evaluated on a finite grid. The verdict is
/// always accompanied by the worst residual and the number of sampled points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub tolerance: f64,
    pub max_violation: f64,
    /// Where the worst violation occurred.
    pub worst: Option<String>,
    pub grid_points: usize,
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    /// Passes iff every row's violation is at most `tolerance`.
    pub fn from_rows(check: impl Into<String>, tolerance: f64, rows: Vec<CheckRow>) -> Self {
        let mut max_violation = 0.0_f64;
        let mut worst = None;
        for r in &rows {
            if r.violation > max_violation || r.violation.is_nan() {
                max_violation = r.violation;
                worst = Some(r.point.to_string());
            }
        }
        CheckReport {
            check: check.into(),
            passed: max_violation <= tolerance,
            tolerance,
            max_violation,
            worst,
            grid_points: rows.len(),
            rows,
        }
    }

    pub fn with_worst(mut self, description: impl Into<String>) -> Self {
        self.worst = Some(description.into());
        self
    }

    /// One row per grid point: coordinates `c0..cn` then `violation`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let arity = self.rows.first().map_or(0, |r| r.point.coords().len());
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header: Vec<String> = (0..arity).map(|i| format!("c{i}")).collect();
        header.push("violation".into());
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec: Vec<String> = r.point.coords().iter().map(|&c| fmt_f64(c)).collect();
            rec.push(fmt_f64(r.violation));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fixed 17-significant-digit decimal rendering used by every CSV export.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_tolerance() {
        let rows = vec![
            CheckRow { point: ParamPoint::raw(vec![0.0]), violation: 1e-3 },
            CheckRow { point: ParamPoint::raw(vec![1.0]), violation: 2e-3 },
        ];
        let r = CheckReport::from_rows("x", 1e-2, rows.clone());
        assert!(r.passed);
        assert_eq!(r.worst.as_deref(), Some("(1)"));
        assert!(!CheckReport::from_rows("x", 1e-3, rows).passed);
    }

    #[test]
    fn csv_layout() {
        let r = CheckReport::from_rows(
            "x",
            0.0,
            vec![CheckRow { point: ParamPoint::raw(vec![0.5, 0.25]), violation: 0.0 }],
        );
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "c0,c1,violation\n5.0000000000000000e-1,2.5000000000000000e-1,0.0000000000000000e0\n"
        );
        let back: f64 = s.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.5);
    }
}
