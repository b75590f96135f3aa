use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tracerule::measure::{
    envelops, l1_distance, ppm_distance as grid_distance, OutcomeSurjection, ParamComponent, ParamDomain, ParamGrid,
    ParamInjection, ParamPoint, Ppm, PpmTable,
};
use tracerule::quantum::{
    canonical_model, generate_ppm, mixed_canonical_model, model_generates, split_canonical_model,
    von_neumann_entropy, ModelFile, QuantumModel, Split, ROUND_TRIP_TOL,
};

use super::{require_res, require_tol, Ctx, Rejected};
use crate::args::{
    CanonicalBuildArgs, LevelsetProbeArgs, ModelValidateArgs, PpmDistanceArgs, PpmEnvelopArgs, PpmGenerateArgs,
    SplitBuildArgs,
};
use crate::output::{write_atomic, Check, GridMeta, Report};
use crate::sources::{load_json, load_model, load_ppm, point, project_grid};

/// Largest Hilbert dimension a canonical build will construct.
pub const MAX_CANONICAL_DIM: usize = 1024;

pub fn model_validate(a: ModelValidateArgs, ctx: &Ctx) -> Result<Report> {
    require_res("res", a.res)?;
    let loaded = load_model(&a.model, a.res)?;
    let v = loaded.file.validate()?;
    let mut report = ctx.report();
    let grid = GridMeta::new(&loaded.grid_description, loaded.grid.len());
    for inv in &v.invariants {
        report.check(Check::new(&inv.invariant, inv.residual, inv.tolerance, grid.clone()));
    }
    #[derive(Serialize)]
    struct Out<'a> {
        dim: usize,
        outcomes: &'a [String],
        entries: usize,
        passed: bool,
    }
    report.results(&Out {
        dim: loaded.file.dim,
        outcomes: &loaded.file.outcomes,
        entries: v.entries.len(),
        passed: v.passed,
    })?;
    if let Some(f) = v.first_failure() {
        let message = format!(
            "invalid model: {} residual {} exceeds tolerance {:e}",
            f.invariant, f.residual, f.tolerance
        );
        return Err(Rejected {
            report: Box::new(report),
            message,
        }
        .into());
    }
    Ok(report)
}

pub fn ppm_generate(a: PpmGenerateArgs, ctx: &Ctx) -> Result<Report> {
    require_res("res", a.res)?;
    let loaded = load_model(&a.model, a.res)?;
    let model = loaded.file.into_model()?;
    let ppm = generate_ppm(&model, &loaded.grid)?;
    let mut report = ctx.report();
    report.results(&ppm.to_table_file()?)?;
    Ok(report)
}

fn sample_point(domain: &ParamDomain, rng: &mut ChaCha8Rng) -> Result<ParamPoint> {
    let mut coords = Vec::with_capacity(domain.arity());
    for c in domain.components() {
        match c {
            ParamComponent::Circle { .. } => coords.push(rng.gen_range(0.0..TAU)),
            ParamComponent::Interval { lo, hi, .. } => coords.push(rng.gen_range(*lo..=*hi)),
            ParamComponent::FiniteSet { labels, .. } => coords.push(rng.gen_range(0..labels.len()) as f64),
            ParamComponent::SpherePoint { .. } => {
                let z: f64 = rng.gen_range(-1.0..=1.0);
                coords.push(z.acos());
                coords.push(rng.gen_range(0.0..TAU));
            }
        }
    }
    Ok(domain.point(coords)?)
}

pub fn ppm_distance(a: PpmDistanceArgs, ctx: &Ctx) -> Result<Report> {
    require_res("res", a.res)?;
    let mu = load_ppm(&a.a, a.res)?;
    let nu = load_ppm(&a.b, a.res)?;
    if mu.ppm.domain() != nu.ppm.domain() {
        bail!("the two PPMs live on different parameter domains");
    }
    let (grid, description) = match a.samples {
        Some(0) => bail!("--samples must be positive"),
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let points = (0..n)
                .map(|_| sample_point(mu.ppm.domain(), &mut rng))
                .collect::<Result<Vec<_>>>()?;
            (
                ParamGrid::new(mu.ppm.domain().clone(), points)?,
                format!("{n} uniform random points, seed {}", ctx.seed),
            )
        }
        None if nu.builtin.is_some() || mu.builtin.is_none() => (mu.grid.clone(), mu.grid_description.clone()),
        None => (nu.grid.clone(), nu.grid_description.clone()),
    };
    let d = grid_distance(&mu.ppm, &nu.ppm, &grid)
        .context("cannot evaluate both PPMs on the comparison points")?;
    #[derive(Serialize)]
    struct Out<'a> {
        distance: f64,
        argmax: &'a ParamPoint,
        grid: GridMeta,
    }
    let mut report = ctx.report();
    report.results(&Out {
        distance: d.value,
        argmax: &d.argmax,
        grid: GridMeta::new(description, d.grid_points),
    })?;
    Ok(report)
}

/// Parameter injection and outcome map for `ppm envelop`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopMap {
    /// Pairs `[coarse point, fine point]`; identity when absent.
    #[serde(default)]
    pub injection: Option<Vec<(ParamPoint, ParamPoint)>>,
    /// Fine outcome label to coarse outcome label; identity when absent.
    #[serde(default)]
    pub outcomes: Option<BTreeMap<String, String>>,
}

fn load_table(path: &Path) -> Result<Ppm> {
    let t: PpmTable = load_json(path)?;
    Ppm::try_from(t).with_context(|| format!("invalid PPM table {}", path.display()))
}

pub fn ppm_envelop(a: PpmEnvelopArgs, ctx: &Ctx) -> Result<Report> {
    require_tol("tol", a.tol)?;
    let fine = load_table(&a.fine)?;
    let coarse = load_table(&a.coarse)?;
    let map: EnvelopMap = match &a.map {
        Some(p) => load_json(p)?,
        None => EnvelopMap {
            injection: None,
            outcomes: None,
        },
    };
    let big_xi = match map.injection {
        Some(pairs) => ParamInjection::tabulated(coarse.domain().clone(), fine.domain().clone(), pairs)?,
        None => {
            if coarse.domain() != fine.domain() {
                bail!("PPM domains differ; give an injection in --map");
            }
            ParamInjection::identity(coarse.domain().clone())
        }
    };
    let xi = match map.outcomes {
        Some(m) => {
            let targets = fine
                .space()
                .labels()
                .iter()
                .map(|l| {
                    m.get(l)
                        .map(String::as_str)
                        .with_context(|| format!("outcome map has no image for `{l}`"))
                })
                .collect::<Result<Vec<_>>>()?;
            OutcomeSurjection::from_labels(fine.space().clone(), coarse.space().clone(), &targets)?
        }
        None => {
            if fine.space() != coarse.space() {
                bail!("outcome spaces differ; give an outcome map in --map");
            }
            OutcomeSurjection::identity(fine.space().clone())
        }
    };
    let grid = coarse.table_grid()?;
    big_xi.check_injective(&grid)?;
    let r = envelops(&fine, &big_xi, &xi, &coarse, &grid, a.tol)?;
    ctx.write_csv(|w| r.write_csv(w))?;
    let mut report = ctx.report();
    report.check(Check::from_report(&r, "points of the coarse table"));
    Ok(report)
}

fn build_summary(model: &QuantumModel, grid: &ParamGrid) -> Result<serde_json::Value> {
    let first = &grid.points()[0];
    Ok(serde_json::json!({
        "dim": model.dim(),
        "outcomes": model.space().labels(),
        "split": model.split(),
        "basis_order": model.basis_order(),
        "state_entropy": von_neumann_entropy(&model.state(first)?),
    }))
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_CANONICAL_DIM {
        bail!("the grid has {n} points; canonical models above {MAX_CANONICAL_DIM} dimensions are not built");
    }
    Ok(())
}

pub fn canonical_build(a: CanonicalBuildArgs, ctx: &Ctx) -> Result<Report> {
    require_res("res", a.res)?;
    let loaded = load_ppm(&a.ppm, a.res)?;
    check_dim(loaded.grid.len() * a.multiplicity.max(1))?;
    let table = loaded.ppm.tabulate(&loaded.grid)?;
    let model = match a.multiplicity {
        1 => canonical_model(&table)?,
        r => mixed_canonical_model(&table, r)?,
    };
    let r = model_generates(&model, &table, &loaded.grid, ROUND_TRIP_TOL)?;
    if let Some(p) = &a.model_out {
        write_atomic(p, &serde_json::to_vec(&ModelFile::from_model(&model, &loaded.grid)?)?)?;
    }
    let mut report = ctx.report();
    report.check(Check::from_report(&r, &loaded.grid_description));
    report.results = build_summary(&model, &loaded.grid)?;
    Ok(report)
}

pub fn split_build(a: SplitBuildArgs, ctx: &Ctx) -> Result<Report> {
    require_res("res", a.res)?;
    let loaded = load_ppm(&a.ppm, a.res)?;
    let (prep, meas) = match (a.prep, a.meas, loaded.builtin) {
        (Some(p), Some(m), _) => (p, m),
        (None, None, Some(b)) => b.split(),
        _ => bail!("give both --prep and --meas for a PPM table"),
    };
    let prep_grid = project_grid(&loaded.grid, &prep)?;
    let meas_grid = project_grid(&loaded.grid, &meas)?;
    check_dim(prep_grid.len())?;
    let split = Split { prep, meas };
    let model = split_canonical_model(&loaded.ppm, split, &prep_grid, &meas_grid)?;
    let r = model_generates(&model, &loaded.ppm, &loaded.grid, ROUND_TRIP_TOL)?;
    if let Some(p) = &a.model_out {
        write_atomic(p, &serde_json::to_vec(&ModelFile::from_model(&model, &loaded.grid)?)?)?;
    }
    let mut report = ctx.report();
    report.check(Check::from_report(&r, &loaded.grid_description));
    let mut summary = build_summary(&model, &loaded.grid)?;
    summary["prep_points"] = prep_grid.len().into();
    summary["meas_points"] = meas_grid.len().into();
    report.results = summary;
    Ok(report)
}

pub fn levelset_probe(a: LevelsetProbeArgs, ctx: &Ctx) -> Result<Report> {
    require_res("res", a.res)?;
    require_tol("tol", a.tol)?;
    let loaded = load_ppm(&a.ppm, a.res)?;
    let k = point(loaded.ppm.domain(), &a.point)?;
    let reference = loaded.ppm.eval(&k)?;
    let mut distances = Vec::with_capacity(loaded.grid.len());
    for p in loaded.grid.points() {
        distances.push((p.clone(), l1_distance(&reference, &loaded.ppm.eval(p)?)?));
    }
    ctx.write_csv(|w| {
        let arity = loaded.ppm.domain().arity();
        let mut s = String::new();
        let header: Vec<String> = (0..arity).map(|i| format!("c{i}")).chain(["distance".into()]).collect();
        s.push_str(&header.join(","));
        s.push('\n');
        for (p, d) in &distances {
            let row: Vec<String> = p
                .coords()
                .iter()
                .chain([d])
                .map(|&x| tracerule::report::fmt_f64(x))
                .collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        w.extend_from_slice(s.as_bytes());
        Ok(())
    })?;
    #[derive(Serialize)]
    struct Out<'a> {
        point: &'a ParamPoint,
        measure: &'a [f64],
        members: Vec<&'a ParamPoint>,
        member_count: usize,
        grid: GridMeta,
    }
    let members: Vec<&ParamPoint> = distances.iter().filter(|(_, d)| *d <= a.tol).map(|(p, _)| p).collect();
    let mut report = ctx.report();
    report.results(&Out {
        point: &k,
        measure: reference.weights(),
        member_count: members.len(),
        members,
        grid: GridMeta::new(&loaded.grid_description, loaded.grid.len()),
    })?;
    Ok(report)
}
