//! Parameter spaces, points, finite grids, and parametrized families.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// One factor of a parameter space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamComponent {
    /// Angle modulo 2pi, stored in `[0, 2pi)`.
    Circle { name: String },
    /// Closed real interval.
    Interval { name: String, lo: f64, hi: f64 },
    /// Finite set of labelled choices; the coordinate is the label index.
    FiniteSet { name: String, labels: Vec<String> },
    /// Point on the unit sphere as (colatitude in `[0, pi]`, longitude in `[0, 2pi)`).
    SpherePoint { name: String },
}

impl ParamComponent {
    pub fn circle(name: impl Into<String>) -> Self {
        ParamComponent::Circle { name: name.into() }
    }

    pub fn interval(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        ParamComponent::Interval {
            name: name.into(),
            lo,
            hi,
        }
    }

    pub fn finite_set<S: Into<String>>(name: impl Into<String>, labels: impl IntoIterator<Item = S>) -> Self {
        ParamComponent::FiniteSet {
            name: name.into(),
            labels: labels.into_iter().map(Into::into).collect(),
        }
    }

    pub fn sphere(name: impl Into<String>) -> Self {
        ParamComponent::SpherePoint { name: name.into() }
    }

    pub fn name(&self) -> &str {
        match self {
            ParamComponent::Circle { name }
            | ParamComponent::Interval { name, .. }
            | ParamComponent::FiniteSet { name, .. }
            | ParamComponent::SpherePoint { name } => name,
        }
    }

    /// Number of coordinates this component contributes to a point.
    pub fn arity(&self) -> usize {
        match self {
            ParamComponent::SpherePoint { .. } => 2,
            _ => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ParamComponent::Interval { name, lo, hi } if !(lo.is_finite() && hi.is_finite() && lo <= hi) => {
                Err(Error::domain(format!("interval {name:?} has bounds [{lo}, {hi}]")))
            }
            ParamComponent::FiniteSet { name, labels } if labels.is_empty() => {
                Err(Error::domain(format!("finite set {name:?} is empty")))
            }
            _ => Ok(()),
        }
    }

    fn normalize(&self, coords: &mut [f64]) -> Result<()> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain(format!("non-finite coordinate for {:?}", self.name())));
        }
        match self {
            ParamComponent::Circle { .. } => coords[0] = normalize_angle(coords[0]),
            ParamComponent::Interval { name, lo, hi } => {
                let v = coords[0];
                if v < lo - tol::ANGLE || v > hi + tol::ANGLE {
                    return Err(Error::domain(format!("{v} outside interval {name:?} [{lo}, {hi}]")));
                }
                coords[0] = v.clamp(*lo, *hi);
            }
            ParamComponent::FiniteSet { name, labels } => {
                let v = coords[0];
                let r = v.round();
                if (v - r).abs() > tol::ANGLE || r < 0.0 || r as usize >= labels.len() {
                    return Err(Error::domain(format!(
                        "{v} is not an index into finite set {name:?} of size {}",
                        labels.len()
                    )));
                }
                coords[0] = r;
            }
            ParamComponent::SpherePoint { name } => {
                let t = coords[0];
                if !(-tol::ANGLE..=PI + tol::ANGLE).contains(&t) {
                    return Err(Error::domain(format!("colatitude {t} of {name:?} outside [0, pi]")));
                }
                coords[0] = t.clamp(0.0, PI);
                coords[1] = normalize_angle(coords[1]);
            }
        }
        Ok(())
    }

    fn coords_match(&self, a: &[f64], b: &[f64]) -> bool {
        match self {
            ParamComponent::Circle { .. } => angle_distance(a[0], b[0]) <= tol::ANGLE,
            ParamComponent::Interval { .. } | ParamComponent::FiniteSet { .. } => (a[0] - b[0]).abs() <= tol::ANGLE,
            ParamComponent::SpherePoint { .. } => {
                let u = sphere_unit(a[0], a[1]);
                let v = sphere_unit(b[0], b[1]);
                let d2: f64 = (0..3).map(|i| (u[i] - v[i]).powi(2)).sum();
                d2.sqrt() <= tol::ANGLE
            }
        }
    }
}

/// Map an angle to `[0, 2pi)`.
pub fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Shortest distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

/// Unit vector for colatitude `theta` and longitude `phi`.
pub fn sphere_unit(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Ordered list of parameter components. A domain with zero components has
/// exactly one (empty) point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub struct ParamDomain {
    components: Vec<ParamComponent>,
    offsets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DomainRepr {
    components: Vec<ParamComponent>,
}

impl TryFrom<DomainRepr> for ParamDomain {
    type Error = Error;
    fn try_from(r: DomainRepr) -> Result<Self> {
        ParamDomain::new(r.components)
    }
}

impl From<ParamDomain> for DomainRepr {
    fn from(d: ParamDomain) -> Self {
        DomainRepr {
            components: d.components,
        }
    }
}

impl ParamDomain {
    pub fn new(components: Vec<ParamComponent>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(components.len() + 1);
        let mut off = 0;
        for c in &components {
            c.validate()?;
            offsets.push(off);
            off += c.arity();
        }
        offsets.push(off);
        Ok(ParamDomain { components, offsets })
    }

    /// The zero-component domain.
    pub fn unit() -> Self {
        ParamDomain {
            components: Vec::new(),
            offsets: vec![0],
        }
    }

    pub fn components(&self) -> &[ParamComponent] {
        &self.components
    }

    /// Total number of coordinates of a point.
    pub fn arity(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn coord_range(&self, component: usize) -> std::ops::Range<usize> {
        self.offsets[component]..self.offsets[component + 1]
    }

    /// Validate and normalize coordinates into a point of this domain.
    pub fn point(&self, coords: impl Into<Vec<f64>>) -> Result<ParamPoint> {
        let mut coords = coords.into();
        if coords.len() != self.arity() {
            return Err(Error::domain(format!(
                "point has {} coordinates, domain expects {}",
                coords.len(),
                self.arity()
            )));
        }
        for (i, c) in self.components.iter().enumerate() {
            c.normalize(&mut coords[self.coord_range(i)])?;
        }
        Ok(ParamPoint { coords })
    }

    /// Like [`ParamDomain::point`], for a point that should already be normalized.
    pub fn check(&self, k: &ParamPoint) -> Result<ParamPoint> {
        self.point(k.coords.clone())
    }

    /// Coordinate equality with modular tolerance on angles.
    pub fn points_match(&self, a: &ParamPoint, b: &ParamPoint) -> bool {
        a.coords.len() == self.arity()
            && b.coords.len() == self.arity()
            && self.components.iter().enumerate().all(|(i, c)| {
                let r = self.coord_range(i);
                c.coords_match(&a.coords[r.clone()], &b.coords[r])
            })
    }

    /// The sub-domain made of the listed components, in the listed order.
    pub fn subdomain(&self, components: &[usize]) -> Result<ParamDomain> {
        let picked = components
            .iter()
            .map(|&i| {
                self.components
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::domain(format!("component index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        ParamDomain::new(picked)
    }

    /// Restrict a point to the listed components.
    pub fn project(&self, k: &ParamPoint, components: &[usize]) -> Result<ParamPoint> {
        if k.coords.len() != self.arity() {
            return Err(Error::domain("point does not belong to this domain"));
        }
        let mut coords = Vec::new();
        for &i in components {
            if i >= self.components.len() {
                return Err(Error::domain(format!("component index {i} out of range")));
            }
            coords.extend_from_slice(&k.coords[self.coord_range(i)]);
        }
        Ok(ParamPoint { coords })
    }

    /// Assemble a full point from parts, each given with the components it
    /// fills. Every component must be covered exactly once.
    pub fn assemble(&self, parts: &[(&[usize], &ParamPoint)]) -> Result<ParamPoint> {
        let mut coords = vec![f64::NAN; self.arity()];
        let mut covered = vec![false; self.components.len()];
        for (components, part) in parts {
            let mut cursor = 0;
            for &i in components.iter() {
                if i >= self.components.len() || covered[i] {
                    return Err(Error::domain(format!("component {i} missing or assigned twice")));
                }
                covered[i] = true;
                let r = self.coord_range(i);
                let n = r.len();
                let src = part
                    .coords
                    .get(cursor..cursor + n)
                    .ok_or_else(|| Error::domain("part has too few coordinates"))?;
                coords[r].copy_from_slice(src);
                cursor += n;
            }
            if cursor != part.coords.len() {
                return Err(Error::domain("part has too many coordinates"));
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(Error::domain(format!("component {i} not assigned")));
        }
        self.point(coords)
    }
}

/// A point of a parameter domain, as its flat coordinate list.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamPoint {
    coords: Vec<f64>,
}

impl ParamPoint {
    /// Unvalidated point; use [`ParamDomain::point`] to validate.
    pub fn raw(coords: impl Into<Vec<f64>>) -> Self {
        ParamPoint { coords: coords.into() }
    }

    pub fn empty() -> Self {
        ParamPoint { coords: Vec::new() }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }
}

impl fmt::Debug for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Nonempty finite sample of a domain; every `sup` or `for all` statement in
/// this crate is evaluated over one of these.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct ParamGrid {
    domain: ParamDomain,
    points: Vec<ParamPoint>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    domain: ParamDomain,
    points: Vec<ParamPoint>,
}

impl TryFrom<GridRepr> for ParamGrid {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        ParamGrid::new(r.domain, r.points)
    }
}

impl From<ParamGrid> for GridRepr {
    fn from(g: ParamGrid) -> Self {
        GridRepr {
            domain: g.domain,
            points: g.points,
        }
    }
}

impl ParamGrid {
    pub fn new(domain: ParamDomain, points: Vec<ParamPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("grid must contain at least one point"));
        }
        let points = points.iter().map(|p| domain.check(p)).collect::<Result<Vec<_>>>()?;
        Ok(ParamGrid { domain, points })
    }

    /// Cartesian product of per-coordinate value lists; the last coordinate
    /// varies fastest.
    pub fn cartesian(domain: ParamDomain, axes: &[Vec<f64>]) -> Result<Self> {
        if axes.len() != domain.arity() {
            return Err(Error::domain(format!(
                "{} axes for a domain with {} coordinates",
                axes.len(),
                domain.arity()
            )));
        }
        let mut points = vec![Vec::new()];
        for axis in axes {
            let mut next = Vec::with_capacity(points.len() * axis.len());
            for p in &points {
                for &v in axis {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            points = next;
        }
        let points = points
            .into_iter()
            .map(|c| domain.point(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, points)
    }

    /// The single-point grid of the zero-component domain.
    pub fn unit() -> Self {
        ParamGrid {
            domain: ParamDomain::unit(),
            points: vec![ParamPoint::empty()],
        }
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    pub fn points(&self) -> &[ParamPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, k: &ParamPoint) -> Option<usize> {
        self.points.iter().position(|p| self.domain.points_match(p, k))
    }
}

/// `n` equally spaced angles `2 pi i / n`, i = 0..n.
pub fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

type Evaluator<T> = Arc<dyn Fn(&ParamPoint) -> Result<T> + Send + Sync>;

#[derive(Clone)]
enum Source<T> {
    Closed { name: String, eval: Evaluator<T> },
    Table(Vec<(ParamPoint, T)>),
}

/// A total map from a parameter domain to values, either a named closed-form
/// function or a table with exact-point lookup.
#[derive(Clone)]
pub struct Family<T> {
    domain: ParamDomain,
    source: Source<T>,
}

impl<T: Clone> Family<T> {
    pub fn closed_form<F>(name: impl Into<String>, domain: ParamDomain, eval: F) -> Self
    where
        F: Fn(&ParamPoint) -> Result<T> + Send + Sync + 'static,
    {
        Family {
            domain,
            source: Source::Closed {
                name: name.into(),
                eval: Arc::new(eval),
            },
        }
    }

    pub fn constant(name: impl Into<String>, domain: ParamDomain, value: T) -> Self
    where
        T: Send + Sync + 'static,
    {
        Self::closed_form(name, domain, move |_| Ok(value.clone()))
    }

    pub fn tabulated(domain: ParamDomain, entries: Vec<(ParamPoint, T)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("tabulated family needs at least one entry"));
        }
        let mut checked: Vec<(ParamPoint, T)> = Vec::with_capacity(entries.len());
        for (k, v) in entries {
            let k = domain.check(&k)?;
            if checked.iter().any(|(p, _)| domain.points_match(p, &k)) {
                return Err(Error::domain(format!("duplicate table point {k}")));
            }
            checked.push((k, v));
        }
        Ok(Family {
            domain,
            source: Source::Table(checked),
        })
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    /// Name of a closed-form family; `None` for tables.
    pub fn name(&self) -> Option<&str> {
        match &self.source {
            Source::Closed { name, .. } => Some(name),
            Source::Table(_) => None,
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.source, Source::Table(_))
    }

    pub fn table(&self) -> Option<&[(ParamPoint, T)]> {
        match &self.source {
            Source::Table(t) => Some(t),
            Source::Closed { .. } => None,
        }
    }

    pub fn eval(&self, k: &ParamPoint) -> Result<T> {
        let k = self.domain.check(k)?;
        match &self.source {
            Source::Closed { eval, .. } => eval(&k),
            Source::Table(entries) => entries
                .iter()
                .find(|(p, _)| self.domain.points_match(p, &k))
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::domain(format!("point {k} is not in the table"))),
        }
    }

    /// Tabulate on a grid of this family's domain.
    pub fn tabulate(&self, grid: &ParamGrid) -> Result<Self> {
        if grid.domain() != &self.domain {
            return Err(Error::domain("grid domain differs from family domain"));
        }
        let entries = grid
            .points()
            .iter()
            .map(|k| Ok((k.clone(), self.eval(k)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::tabulated(self.domain.clone(), entries)
    }
}

impl<T> fmt::Debug for Family<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Source::Closed { name, .. } => write!(f, "Family::Closed({name})"),
            Source::Table(t) => write!(f, "Family::Table({} entries)", t.len()),
        }
    }
}

/// Map from one parameter domain into another, injective on the grids it is
/// checked on.
#[derive(Clone)]
pub struct ParamInjection {
    from: ParamDomain,
    to: ParamDomain,
    map: Evaluator<ParamPoint>,
}

impl ParamInjection {
    pub fn new<F>(from: ParamDomain, to: ParamDomain, map: F) -> Self
    where
        F: Fn(&ParamPoint) -> Result<ParamPoint> + Send + Sync + 'static,
    {
        ParamInjection {
            from,
            to,
            map: Arc::new(map),
        }
    }

    pub fn identity(domain: ParamDomain) -> Self {
        Self::new(domain.clone(), domain, |k| Ok(k.clone()))
    }

    /// Injection given by an explicit list of (source, image) pairs.
    pub fn tabulated(from: ParamDomain, to: ParamDomain, pairs: Vec<(ParamPoint, ParamPoint)>) -> Result<Self> {
        let table = Family::tabulated(from.clone(), pairs)?;
        Ok(Self::new(from, to, move |k| table.eval(k)))
    }

    pub fn from_domain(&self) -> &ParamDomain {
        &self.from
    }

    pub fn to_domain(&self) -> &ParamDomain {
        &self.to
    }

    /// Image of `k`, validated to lie in the target domain.
    pub fn apply(&self, k: &ParamPoint) -> Result<ParamPoint> {
        let k = self.from.check(k)?;
        let image = (self.map)(&k)?;
        self.to
            .check(&image)
            .map_err(|e| Error::domain(format!("injection image of {k} outside target domain: {e}")))
    }

    /// Verify that distinct grid points have distinct images.
    pub fn check_injective(&self, grid: &ParamGrid) -> Result<()> {
        let images = grid.points().iter().map(|k| self.apply(k)).collect::<Result<Vec<_>>>()?;
        for i in 0..images.len() {
            for j in 0..i {
                if self.to.points_match(&images[i], &images[j]) {
                    return Err(Error::domain(format!(
                        "injection maps {} and {} to the same point",
                        grid.points()[i],
                        grid.points()[j]
                    )));
                }
            }
        }
        Ok(())
    }
}
