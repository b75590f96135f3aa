//! Built-in PPMs and models, and their file-backed counterparts.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use tracerule::bb84::{alpha_family, alpha_grid, alpha_model};
use tracerule::entangle::{
    lat_long_grid, sphere_family, sphere_layout, sphere_model, torus_family, torus_grid, torus_layout, torus_model,
};
use tracerule::measure::{BipartiteLayout, ParamDomain, ParamGrid, ParamPoint, Ppm, PpmTable, Side};
use tracerule::quantum::{ModelFile, QuantumModel};

/// Parses a JSON file; syntax errors carry the file, line, and column.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    Torus,
    Sphere,
    Bb84Alpha,
}

impl Builtin {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "torus" => Some(Builtin::Torus),
            "sphere" => Some(Builtin::Sphere),
            "bb84-alpha" => Some(Builtin::Bb84Alpha),
            _ => None,
        }
    }

    pub fn ppm(self) -> Ppm {
        match self {
            Builtin::Torus => torus_family(),
            Builtin::Sphere => sphere_family(),
            Builtin::Bb84Alpha => alpha_family(),
        }
    }

    pub fn model(self) -> tracerule::Result<QuantumModel> {
        match self {
            Builtin::Torus => torus_model(),
            Builtin::Sphere => sphere_model(),
            Builtin::Bb84Alpha => alpha_model(),
        }
    }

    pub fn layout(self) -> Option<BipartiteLayout> {
        match self {
            Builtin::Torus => Some(torus_layout()),
            Builtin::Sphere => Some(sphere_layout()),
            Builtin::Bb84Alpha => None,
        }
    }

    /// Default prep and meas components.
    pub fn split(self) -> (Vec<usize>, Vec<usize>) {
        match self {
            Builtin::Torus | Builtin::Sphere => (vec![], vec![0, 1]),
            Builtin::Bb84Alpha => (vec![0], vec![1]),
        }
    }

    pub fn grid(self, res: usize) -> Result<(ParamGrid, String)> {
        Ok(match self {
            Builtin::Torus => (torus_grid(res)?, format!("torus {res}x{res} uniform angles")),
            Builtin::Sphere => {
                let layout = sphere_layout();
                let a = lat_long_grid(Side::A, res, res)?;
                let b = lat_long_grid(Side::B, res, res)?;
                (
                    joint_grid(&layout, &a, &b)?,
                    format!("sphere latitude-longitude {res}x{res} per side, all pairs"),
                )
            }
            Builtin::Bb84Alpha => (alpha_grid(res)?, format!("4 preparations x {res} analyzer angles")),
        })
    }
}

pub fn joint_grid(layout: &BipartiteLayout, a: &ParamGrid, b: &ParamGrid) -> Result<ParamGrid> {
    let mut points = Vec::with_capacity(a.len() * b.len());
    for ka in a.points() {
        for kb in b.points() {
            points.push(layout.join(ka, kb)?);
        }
    }
    Ok(ParamGrid::new(layout.domain().clone(), points)?)
}

/// Distinct projections of `grid` onto `components`, in first-seen order.
pub fn project_grid(grid: &ParamGrid, components: &[usize]) -> Result<ParamGrid> {
    let domain = grid.domain();
    let mut points: Vec<ParamPoint> = Vec::new();
    for k in grid.points() {
        let p = domain.project(k, components)?;
        if !points.contains(&p) {
            points.push(p);
        }
    }
    Ok(ParamGrid::new(domain.subdomain(components)?, points)?)
}

pub struct LoadedPpm {
    pub ppm: Ppm,
    pub grid: ParamGrid,
    pub grid_description: String,
    pub builtin: Option<Builtin>,
}

/// Built-in name (tabulated on its `res` grid) or PPM table file (on its
/// own points).
pub fn load_ppm(name: &str, res: usize) -> Result<LoadedPpm> {
    if let Some(b) = Builtin::parse(name) {
        let (grid, grid_description) = b.grid(res)?;
        return Ok(LoadedPpm {
            ppm: b.ppm(),
            grid,
            grid_description,
            builtin: Some(b),
        });
    }
    let table: PpmTable = load_json(Path::new(name))?;
    let ppm = Ppm::try_from(table).with_context(|| format!("invalid PPM table {name}"))?;
    let grid = ppm.table_grid()?;
    Ok(LoadedPpm {
        grid_description: format!("table points of {name}"),
        ppm,
        grid,
        builtin: None,
    })
}

pub struct LoadedModel {
    pub file: ModelFile,
    pub grid: ParamGrid,
    pub grid_description: String,
}

/// Built-in model tabulated on its `res` grid, or a model file.
pub fn load_model(name: &str, res: usize) -> Result<LoadedModel> {
    if let Some(b) = Builtin::parse(name) {
        let (grid, grid_description) = b.grid(res)?;
        let file = ModelFile::from_model(&b.model()?, &grid)?;
        return Ok(LoadedModel {
            file,
            grid,
            grid_description,
        });
    }
    let file: ModelFile = load_json(Path::new(name))?;
    let grid = ParamGrid::new(file.domain.clone(), file.entries.iter().map(|e| e.point.clone()).collect())
        .with_context(|| format!("invalid entry points in {name}"))?;
    Ok(LoadedModel {
        file,
        grid_description: format!("entry points of {name}"),
        grid,
    })
}

/// Point of `domain` from flat coordinates.
pub fn point(domain: &ParamDomain, coords: &[f64]) -> Result<ParamPoint> {
    if coords.len() != domain.arity() {
        bail!("point needs {} coordinates, got {}", domain.arity(), coords.len());
    }
    Ok(domain.point(coords.to_vec())?)
}
