use anyhow::{bail, Context, Result};
use tracerule::entangle::{cube_vertex_grid, lat_long_grid, torus_side_grid};
use tracerule::measure::{
    local_reach_check, marginal_invariance_check, no_signaling_check, BipartiteLayout, OutcomeSpace, ParamGrid, Ppm,
    Side,
};

use super::{require_res, require_tol, Ctx};
use crate::args::{CheckArgs, SphereGridArg};
use crate::output::{Check, Report};
use crate::sources::{load_ppm, project_grid, Builtin};

struct Setup {
    ppm: Ppm,
    layout: BipartiteLayout,
    grid_a: ParamGrid,
    grid_b: ParamGrid,
    description: String,
    /// Resolved sphere grid, echoed in place of the unset option.
    sphere_grid: Option<SphereGridArg>,
}

fn setup(a: &CheckArgs, default_sphere: SphereGridArg) -> Result<Setup> {
    require_res("res", a.res)?;
    require_tol("tol", a.tol)?;
    match Builtin::parse(&a.ppm) {
        Some(Builtin::Torus) => Ok(Setup {
            ppm: Builtin::Torus.ppm(),
            layout: Builtin::Torus.layout().expect("bipartite"),
            grid_a: torus_side_grid(Side::A, a.res)?,
            grid_b: torus_side_grid(Side::B, a.res)?,
            description: format!("torus {0} x {0} uniform angles", a.res),
            sphere_grid: None,
        }),
        Some(Builtin::Sphere) => {
            let kind = a.sphere_grid.unwrap_or(default_sphere);
            let (grid_a, grid_b, description) = match kind {
                SphereGridArg::Cube => (
                    cube_vertex_grid(Side::A)?,
                    cube_vertex_grid(Side::B)?,
                    "sphere cube vertices, 8 per side".to_string(),
                ),
                SphereGridArg::Latlong => (
                    lat_long_grid(Side::A, a.res, a.res)?,
                    lat_long_grid(Side::B, a.res, a.res)?,
                    format!("sphere latitude-longitude {0}x{0} per side", a.res),
                ),
            };
            Ok(Setup {
                ppm: Builtin::Sphere.ppm(),
                layout: Builtin::Sphere.layout().expect("bipartite"),
                grid_a,
                grid_b,
                description,
                sphere_grid: Some(kind),
            })
        }
        Some(Builtin::Bb84Alpha) => bail!("bb84-alpha has no two-party structure"),
        None => {
            let (Some(ac), Some(bc), Some(ao), Some(bo)) =
                (&a.a_components, &a.b_components, &a.a_outcomes, &a.b_outcomes)
            else {
                bail!("a PPM table needs --a-components, --b-components, --a-outcomes and --b-outcomes");
            };
            let loaded = load_ppm(&a.ppm, a.res)?;
            let layout = BipartiteLayout::new(
                loaded.ppm.domain().clone(),
                ac.clone(),
                bc.clone(),
                OutcomeSpace::new(ao.clone())?,
                OutcomeSpace::new(bo.clone())?,
            )
            .context("invalid two-party layout")?;
            Ok(Setup {
                grid_a: project_grid(&loaded.grid, ac)?,
                grid_b: project_grid(&loaded.grid, bc)?,
                description: loaded.grid_description,
                ppm: loaded.ppm,
                layout,
                sphere_grid: None,
            })
        }
    }
}

fn start(ctx: &Ctx, s: &Setup) -> Report {
    let mut report = ctx.report();
    if let Some(k) = s.sphere_grid {
        report.config["sphere_grid"] = serde_json::to_value(k).expect("plain enum");
    }
    report
}

fn side_counts(s: &Setup) -> serde_json::Value {
    serde_json::json!({ "side_a": s.grid_a.len(), "side_b": s.grid_b.len(), "description": s.description })
}

pub fn check_nosignal(a: CheckArgs, ctx: &Ctx) -> Result<Report> {
    let s = setup(&a, SphereGridArg::Latlong)?;
    let r = no_signaling_check(&s.ppm, &s.layout, &s.grid_a, &s.grid_b, a.tol)?;
    ctx.write_csv(|w| r.write_csv(w))?;
    let mut report = start(ctx, &s);
    report.check(Check::from_report(&r, &s.description));
    report.results(&serde_json::json!({ "violation": r.max_violation, "grid": side_counts(&s) }))?;
    Ok(report)
}

pub fn check_reach(a: CheckArgs, ctx: &Ctx) -> Result<Report> {
    let s = setup(&a, SphereGridArg::Cube)?;
    let r = local_reach_check(&s.ppm, &s.layout, &s.grid_a, &s.grid_b, a.tol)?;
    ctx.write_csv(|w| r.report.write_csv(w))?;
    let mut report = start(ctx, &s);
    report.check(Check::from_report(&r.report, &s.description));
    report.results(&serde_json::json!({
        "violation": r.report.max_violation,
        "witnesses": r.witnesses.len(),
        "failing": r.failing,
        "grid": side_counts(&s),
    }))?;
    Ok(report)
}

pub fn check_marginals(a: CheckArgs, ctx: &Ctx) -> Result<Report> {
    let s = setup(&a, SphereGridArg::Latlong)?;
    let r = marginal_invariance_check(&s.ppm, &s.layout, &s.grid_a, &s.grid_b, a.tol)?;
    ctx.write_csv(|w| r.report.write_csv(w))?;
    let mut report = start(ctx, &s);
    report.check(Check::from_report(&r.report, &s.description));
    report.results(&serde_json::json!({
        "violation": r.report.max_violation,
        "marginal_a": r.marginal_a,
        "marginal_b": r.marginal_b,
        "grid": side_counts(&s),
    }))?;
    Ok(report)
}
