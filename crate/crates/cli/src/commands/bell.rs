use std::f64::consts::SQRT_2;
use std::io::Write;

use anyhow::{bail, Result};
use serde::Serialize;
use tracerule::entangle::{
    contour_export, orbit_rotation, s_bell, s_bell_maximize, write_contour_csv, BellSearch, BellSetting,
    OrbitResult, SpherePairPoint, ORBIT_MAP,
};

use super::{require_res, require_tol, Ctx};
use crate::args::{BellMaxArgs, BellOrbitArgs, BellScanArgs, SearchArg};
use crate::output::{write_atomic, Check, GridMeta, Report};

/// Tolerance on `|E| = sqrt(2)/2` at the marked points.
pub const MARKED_E: f64 = 1e-12;

pub fn bell_scan(a: BellScanArgs, ctx: &Ctx) -> Result<Report> {
    require_res("resolution", a.resolution)?;
    let rows = contour_export(a.resolution)?;
    let mut csv = Vec::new();
    write_contour_csv(&rows, &mut csv)?;
    match &ctx.csv {
        Some(p) => write_atomic(p, &csv)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&csv)?;
            out.flush()?;
            ctx.stdout_taken.set(true);
        }
    }
    let marked: Vec<f64> = rows.iter().filter(|r| r.kind == "marked").map(|r| r.e).collect();
    let residual = marked
        .iter()
        .map(|e| (e.abs() - SQRT_2 / 2.0).abs())
        .fold(0.0, f64::max);
    let mut report = ctx.report();
    report.check(Check::new(
        "marked points have |E| = sqrt(2)/2",
        residual,
        MARKED_E,
        GridMeta::new("four marked points of the maximal setting", marked.len()),
    ));
    report.results(&serde_json::json!({
        "rows": rows.len() - marked.len(),
        "marked_rows": marked.len(),
        "marked_e": marked,
        "grid": GridMeta::new(format!("torus {0}x{0} uniform angles", a.resolution), rows.len() - 4),
    }))?;
    Ok(report)
}

pub fn bell_max(a: BellMaxArgs, ctx: &Ctx) -> Result<Report> {
    let search = match a.search {
        SearchArg::Free => BellSearch::Free,
        SearchArg::Diagonal => BellSearch::Diagonal,
    };
    let m = s_bell_maximize(a.resolution, search)?;
    let reference = BellSetting::maximal();
    #[derive(Serialize)]
    struct Out<'a> {
        value: f64,
        tsirelson: f64,
        tsirelson_gap: f64,
        classical_bound: f64,
        reference_setting: BellSetting,
        reference_value: f64,
        #[serde(flatten)]
        max: &'a tracerule::entangle::BellMax,
    }
    let mut report = ctx.report();
    report.results(&Out {
        value: m.value,
        tsirelson: 2.0 * SQRT_2,
        tsirelson_gap: 2.0 * SQRT_2 - m.value,
        classical_bound: 2.0,
        reference_setting: reference,
        reference_value: s_bell(&reference),
        max: &m,
    })?;
    Ok(report)
}

fn pair(name: &str, c: &[f64]) -> Result<SpherePairPoint> {
    let [ta, pa, tb, pb] = c else {
        bail!("--{name} takes theta_A,phi_A,theta_B,phi_B, got {} values", c.len());
    };
    Ok(SpherePairPoint::from_coords([*ta, *pa, *tb, *pb])?)
}

pub fn bell_orbit(a: BellOrbitArgs, ctx: &Ctx) -> Result<Report> {
    require_tol("tol", a.tol)?;
    let p = pair("pair-a", &a.pair_a)?;
    let q = pair("pair-b", &a.pair_b)?;
    let r = orbit_rotation(&p, &q, a.tol)?;
    let mut report = ctx.report();
    let kind = match r {
        OrbitResult::Unique { .. } => "unique rotation",
        OrbitResult::Degenerate { .. } => "coset representative",
    };
    report.check(Check::new(
        format!("rotation maps pair to pair ({kind})"),
        r.residual(),
        ORBIT_MAP,
        GridMeta::new("the two given pairs", 2),
    ));
    report.results(&r)?;
    Ok(report)
}
