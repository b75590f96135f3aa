//! Elliptical analyzers on both sides of a singlet: the PPM on `S^2 x S^2`,
//! which depends on a pair only through the angle `zeta` between its unit
//! vectors, and the rotation orbits of such pairs.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::states::{elliptical_povm, product_povm, side_space, singlet_state};
use crate::error::{Error, Result};
use crate::measure::{
    normalize_angle, sphere_unit, BipartiteLayout, Family, ParamComponent, ParamDomain, ParamGrid, ParamPoint, Ppm,
    ProbabilityMeasure, Side,
};
use crate::quantum::{DensityOperator, QuantumModel, Split};
use crate::tol;

/// Colatitude `theta` in `[0, pi]`, longitude `phi` in `[0, 2pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(-tol::ANGLE..=std::f64::consts::PI + tol::ANGLE).contains(&theta) {
            return Err(Error::domain(format!("colatitude {theta} outside [0, pi]")));
        }
        Ok(SpherePoint {
            theta: theta.clamp(0.0, std::f64::consts::PI),
            phi: normalize_angle(phi),
        })
    }

    /// Point of a unit (or nonzero) vector.
    pub fn from_vector(v: &Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        if !(n > 0.0) {
            return Err(Error::domain("zero vector has no direction"));
        }
        SpherePoint::new((v.z / n).clamp(-1.0, 1.0).acos(), v.y.atan2(v.x))
    }

    pub fn unit(&self) -> Vector3<f64> {
        Vector3::from(sphere_unit(self.theta, self.phi))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePairPoint {
    pub a: SpherePoint,
    pub b: SpherePoint,
}

impl SpherePairPoint {
    pub fn new(a: SpherePoint, b: SpherePoint) -> Self {
        SpherePairPoint { a, b }
    }

    /// `(theta_A, phi_A, theta_B, phi_B)`.
    pub fn from_coords(c: [f64; 4]) -> Result<Self> {
        Ok(SpherePairPoint {
            a: SpherePoint::new(c[0], c[1])?,
            b: SpherePoint::new(c[2], c[3])?,
        })
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.a.theta, self.a.phi, self.b.theta, self.b.phi]
    }
}

fn cos_zeta(p: &SpherePairPoint) -> f64 {
    let (a, b) = (p.a, p.b);
    (a.theta.cos() * b.theta.cos() + a.theta.sin() * b.theta.sin() * (a.phi - b.phi).cos()).clamp(-1.0, 1.0)
}

/// Angle in `[0, pi]` between the two unit vectors.
pub fn angle_zeta(p: &SpherePairPoint) -> f64 {
    cos_zeta(p).acos()
}

/// `mu(11) = mu(22) = (1 - cos zeta)/4`, `mu(12) = mu(21) = (1 + cos zeta)/4`.
pub fn sphere_ppm(p: &SpherePairPoint) -> ProbabilityMeasure {
    ProbabilityMeasure::new(sphere_layout().joint_space().clone(), zeta_weights(cos_zeta(p)).to_vec())
        .expect("weights sum to one")
}

/// Weights as a function of `cos zeta` alone.
pub fn zeta_weights(cos_zeta: f64) -> [f64; 4] {
    let same = 0.25 * (1.0 - cos_zeta);
    let diff = 0.25 * (1.0 + cos_zeta);
    [same, diff, diff, same]
}

/// `mu(11) + mu(22) - mu(12) - mu(21) = -cos zeta`. This correlation is an
/// extension; the torus correlation is the primary one.
pub fn sphere_correlation(p: &SpherePairPoint) -> f64 {
    let w = zeta_weights(cos_zeta(p));
    w[0] + w[3] - w[1] - w[2]
}

pub fn sphere_domain() -> ParamDomain {
    ParamDomain::new(vec![ParamComponent::sphere("a"), ParamComponent::sphere("b")]).expect("valid domain")
}

pub fn sphere_layout() -> BipartiteLayout {
    BipartiteLayout::new(sphere_domain(), vec![0], vec![1], side_space("A"), side_space("B")).expect("valid layout")
}

pub fn sphere_family() -> Ppm {
    Ppm::closed_form("sphere pair", sphere_domain(), sphere_layout().joint_space().clone(), |k| {
        let p = SpherePairPoint::from_coords([k.coord(0), k.coord(1), k.coord(2), k.coord(3)])?;
        Ok(zeta_weights(cos_zeta(&p)).to_vec())
    })
}

/// Singlet with elliptical analyzers on both sides.
pub fn sphere_model() -> Result<QuantumModel> {
    let domain = sphere_domain();
    let joint = sphere_layout().joint_space().clone();
    let rho_fn = Family::constant("singlet", domain.subdomain(&[])?, DensityOperator::pure(&singlet_state()));
    let sp = joint.clone();
    let povm_fn = Family::closed_form("elliptical analyzers", domain.clone(), move |k| {
        product_povm(
            &elliptical_povm(k.coord(0), k.coord(1), side_space("A")),
            &elliptical_povm(k.coord(2), k.coord(3), side_space("B")),
            sp.clone(),
        )
    });
    QuantumModel::with_split(
        4,
        domain,
        Split {
            prep: vec![],
            meas: vec![0, 1],
        },
        joint,
        rho_fn,
        povm_fn,
    )
}

/// The eight vertices `(+-1, +-1, +-1)/sqrt 3` on one side. Pair angles on
/// this set take every value that occurs from any fixed vertex, which is
/// what a grid local-reach search needs.
pub fn cube_vertex_grid(side: Side) -> Result<ParamGrid> {
    let domain = sphere_layout().side_domain(side)?;
    let mut points = Vec::with_capacity(8);
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let p = SpherePoint::from_vector(&Vector3::new(sx, sy, sz))?;
                points.push(domain.point(vec![p.theta, p.phi])?);
            }
        }
    }
    ParamGrid::new(domain, points)
}

/// `n_theta` colatitudes `(i + 1/2) pi / n_theta` times `n_phi` uniform
/// longitudes on one side.
pub fn lat_long_grid(side: Side, n_theta: usize, n_phi: usize) -> Result<ParamGrid> {
    if n_theta == 0 || n_phi == 0 {
        return Err(Error::domain("latitude-longitude grid needs at least one row and column"));
    }
    let domain = sphere_layout().side_domain(side)?;
    let thetas: Vec<f64> = (0..n_theta)
        .map(|i| (i as f64 + 0.5) * std::f64::consts::PI / n_theta as f64)
        .collect();
    let mut points = Vec::with_capacity(n_theta * n_phi);
    for &t in &thetas {
        for &f in &crate::measure::uniform_angles(n_phi) {
            points.push(domain.point(vec![t, f])?);
        }
    }
    ParamGrid::new(domain, points)
}

/// Domain point of a pair.
pub fn sphere_point(p: &SpherePairPoint) -> ParamPoint {
    ParamPoint::raw(p.coords().to_vec())
}

/// Proper rotation of `R^3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 3]; 3]", into = "[[f64; 3]; 3]")]
pub struct Rotation3(Matrix3<f64>);

impl TryFrom<[[f64; 3]; 3]> for Rotation3 {
    type Error = Error;

    fn try_from(rows: [[f64; 3]; 3]) -> Result<Self> {
        Rotation3::new(Matrix3::from_fn(|i, j| rows[i][j]))
    }
}

impl From<Rotation3> for [[f64; 3]; 3] {
    fn from(r: Rotation3) -> Self {
        std::array::from_fn(|i| std::array::from_fn(|j| r.0[(i, j)]))
    }
}

impl Rotation3 {
    /// Checks `R^T R = I` entrywise and `det R = 1`, both within
    /// [`tol::ROTATION`].
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let orth = (m.transpose() * m - Matrix3::identity()).abs().max();
        if orth > tol::ROTATION {
            return Err(Error::invariant("rotation orthogonality", orth, tol::ROTATION));
        }
        let det = (m.determinant() - 1.0).abs();
        if det > tol::ROTATION {
            return Err(Error::invariant("rotation determinant", det, tol::ROTATION));
        }
        Ok(Rotation3(m))
    }

    pub fn identity() -> Self {
        Rotation3(Matrix3::identity())
    }

    /// Rotation by `angle` about `axis` (Rodrigues).
    pub fn about_axis(axis: &Vector3<f64>, angle: f64) -> Result<Self> {
        let n = axis.norm();
        if !(n > 0.0) {
            return Err(Error::domain("rotation axis must be nonzero"));
        }
        let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(*axis), angle);
        Rotation3::new(*rot.matrix())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    pub fn apply_point(&self, p: &SpherePoint) -> Result<SpherePoint> {
        SpherePoint::from_vector(&self.apply(&p.unit()))
    }

    pub fn apply_pair(&self, p: &SpherePairPoint) -> Result<SpherePairPoint> {
        Ok(SpherePairPoint::new(self.apply_point(&p.a)?, self.apply_point(&p.b)?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitResult {
    /// `0 < zeta < pi`: exactly one rotation maps the pair to the other.
    Unique {
        zeta: f64,
        rotation: Rotation3,
        residual: f64,
    },
    /// `zeta` is 0 or pi: the pair is fixed by rotations about its axis, so
    /// the rotation is one representative of a coset.
    Degenerate {
        zeta: f64,
        /// Stabilizer of the pair.
        isotropy: String,
        /// Level set of the PPM through the pair.
        level_set: String,
        rotation: Rotation3,
        residual: f64,
    },
}

impl OrbitResult {
    pub fn rotation(&self) -> &Rotation3 {
        match self {
            OrbitResult::Unique { rotation, .. } | OrbitResult::Degenerate { rotation, .. } => rotation,
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            OrbitResult::Unique { residual, .. } | OrbitResult::Degenerate { residual, .. } => *residual,
        }
    }
}

/// Tolerance on `|R u - v|` for a returned rotation.
pub const ORBIT_MAP: f64 = 1e-9;

// Orthonormal frame with first column `u`, second in the plane of `u, w`.
fn frame(u: &Vector3<f64>, w: &Vector3<f64>) -> Matrix3<f64> {
    let e1 = u.normalize();
    let e2 = (w - e1 * e1.dot(w)).normalize();
    Matrix3::from_columns(&[e1, e2, e1.cross(&e2)])
}

fn any_perpendicular(u: &Vector3<f64>) -> Vector3<f64> {
    let pick = if u.x.abs() <= u.y.abs() && u.x.abs() <= u.z.abs() {
        Vector3::x()
    } else if u.y.abs() <= u.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    pick - u * u.dot(&pick)
}

/// Rotation taking pair `p` to pair `q` (same `zeta` within `tol`), by
/// aligning the frames `(u_A, u_B - (u_A . u_B) u_A, cross)` of both pairs.
pub fn orbit_rotation(p: &SpherePairPoint, q: &SpherePairPoint, tol: f64) -> Result<OrbitResult> {
    let (zp, zq) = (angle_zeta(p), angle_zeta(q));
    if (zp - zq).abs() > tol {
        return Err(Error::domain(format!("pairs have different zeta: {zp} and {zq}")));
    }
    let (pa, pb, qa, qb) = (p.a.unit(), p.b.unit(), q.a.unit(), q.b.unit());
    let degenerate = zp.min(std::f64::consts::PI - zp) <= tol::ZETA_DEGENERATE;
    let (fp, fq) = if degenerate {
        (frame(&pa, &any_perpendicular(&pa)), frame(&qa, &any_perpendicular(&qa)))
    } else {
        (frame(&pa, &pb), frame(&qa, &qb))
    };
    let rot = Rotation3::new(fq * fp.transpose())?;
    let residual = (rot.apply(&pa) - qa).norm().max((rot.apply(&pb) - qb).norm());
    if residual > ORBIT_MAP && !degenerate {
        return Err(Error::numerical("orbit rotation does not map the pair", residual));
    }
    Ok(if degenerate {
        OrbitResult::Degenerate {
            zeta: zp,
            isotropy: "SO(2)".into(),
            level_set: "S^2".into(),
            rotation: rot,
            residual,
        }
    } else {
        OrbitResult::Unique {
            zeta: zp,
            rotation: rot,
            residual,
        }
    })
}
