//! Linear-polarization analyzers on both sides of a Bell pair: the PPM on
//! `S^1 x S^1`, its correlation, CHSH values, and contour exports.

use std::f64::consts::{FRAC_PI_8, TAU};
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::states::{bell_state, linear_povm, product_povm, side_space};
use crate::error::{Error, Result};
use crate::measure::{
    normalize_angle, uniform_angles, BipartiteLayout, Family, ParamComponent, ParamDomain, ParamGrid, Ppm,
    ProbabilityMeasure, Side,
};
use crate::quantum::{DensityOperator, QuantumModel, Split};
use crate::report::fmt_f64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub theta_a: f64,
    pub theta_b: f64,
}

impl TorusPoint {
    /// Both angles reduced to `[0, 2pi)`.
    pub fn new(theta_a: f64, theta_b: f64) -> Self {
        TorusPoint {
            theta_a: normalize_angle(theta_a),
            theta_b: normalize_angle(theta_b),
        }
    }
}

fn torus_weights(theta_a: f64, theta_b: f64) -> [f64; 4] {
    let c = (theta_a - theta_b).cos();
    let same = 0.25 * (1.0 + c);
    let diff = 0.25 * (1.0 - c);
    [same, diff, diff, same]
}

/// `mu(1A1B) = mu(2A2B) = (1 + cos d)/4`, `mu(1A2B) = mu(2A1B) = (1 - cos d)/4`
/// with `d = theta_A - theta_B`.
pub fn torus_ppm(p: TorusPoint) -> ProbabilityMeasure {
    ProbabilityMeasure::new(torus_layout().joint_space().clone(), torus_weights(p.theta_a, p.theta_b).to_vec())
        .expect("weights sum to one")
}

/// `mu(11) + mu(22) - mu(12) - mu(21)`.
pub fn correlation_e(p: TorusPoint) -> f64 {
    let w = torus_weights(p.theta_a, p.theta_b);
    w[0] + w[3] - w[1] - w[2]
}

pub fn torus_domain() -> ParamDomain {
    ParamDomain::new(vec![ParamComponent::circle("theta_a"), ParamComponent::circle("theta_b")]).expect("valid domain")
}

/// Side A owns `theta_a`, side B `theta_b`; outcomes `1A, 2A` and `1B, 2B`.
pub fn torus_layout() -> BipartiteLayout {
    BipartiteLayout::new(torus_domain(), vec![0], vec![1], side_space("A"), side_space("B")).expect("valid layout")
}

pub fn torus_family() -> Ppm {
    Ppm::closed_form("torus", torus_domain(), torus_layout().joint_space().clone(), |k| {
        Ok(torus_weights(k.coord(0), k.coord(1)).to_vec())
    })
}

/// Four-dimensional model: the Bell state, no preparation parameters, and
/// `M_A(theta_A) (x) M_B(theta_B)` as the measurement.
pub fn torus_model() -> Result<QuantumModel> {
    let domain = torus_domain();
    let joint = torus_layout().joint_space().clone();
    let rho = DensityOperator::pure(&bell_state());
    let rho_fn = Family::constant("bell state", domain.subdomain(&[])?, rho);
    let sp = joint.clone();
    let povm_fn = Family::closed_form("linear analyzers", domain.clone(), move |k| {
        product_povm(&linear_povm(k.coord(0), side_space("A")), &linear_povm(k.coord(1), side_space("B")), sp.clone())
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

/// `n` uniform angles on one side of [`torus_layout`].
pub fn torus_side_grid(side: Side, n: usize) -> Result<ParamGrid> {
    ParamGrid::cartesian(torus_layout().side_domain(side)?, &[uniform_angles(n)])
}

/// `n x n` uniform grid on the full torus.
pub fn torus_grid(n: usize) -> Result<ParamGrid> {
    ParamGrid::cartesian(torus_domain(), &[uniform_angles(n), uniform_angles(n)])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellSetting {
    pub theta_a: f64,
    pub theta_a_prime: f64,
    pub theta_b: f64,
    pub theta_b_prime: f64,
}

impl BellSetting {
    /// From `(theta_A, theta_B, theta_A', theta_B')`.
    pub fn from_abab(theta_a: f64, theta_b: f64, theta_a_prime: f64, theta_b_prime: f64) -> Self {
        BellSetting {
            theta_a,
            theta_a_prime,
            theta_b,
            theta_b_prime,
        }
    }

    /// `(-3pi/8, -pi/8, pi/8, 3pi/8)`, the maximally violating setting.
    pub fn maximal() -> Self {
        Self::from_abab(-3.0 * FRAC_PI_8, -FRAC_PI_8, FRAC_PI_8, 3.0 * FRAC_PI_8)
    }

    fn from_array(a: [f64; 4]) -> Self {
        BellSetting {
            theta_a: a[0],
            theta_a_prime: a[1],
            theta_b: a[2],
            theta_b_prime: a[3],
        }
    }

    /// `[E(a, b), E(a, b'), E(a', b), E(a', b')]`.
    pub fn correlations(&self) -> [f64; 4] {
        let e = |x, y| correlation_e(TorusPoint::new(x, y));
        [
            e(self.theta_a, self.theta_b),
            e(self.theta_a, self.theta_b_prime),
            e(self.theta_a_prime, self.theta_b),
            e(self.theta_a_prime, self.theta_b_prime),
        ]
    }
}

/// `E(a, b) - E(a, b') + E(a', b) + E(a', b')`.
pub fn s_bell(s: &BellSetting) -> f64 {
    let [ab, abp, apb, apbp] = s.correlations();
    ab - abp + apb + apbp
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellSearch {
    /// All four angles independent.
    #[default]
    Free,
    /// All four angles equal.
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellMax {
    pub setting: BellSetting,
    pub value: f64,
    pub correlations: [f64; 4],
    pub resolution: usize,
    pub search: BellSearch,
    pub evaluations: usize,
}

pub const REFINE_ITERATIONS: usize = 20;
pub const REFINE_SHRINK: f64 = 0.5;

/// Grid search over `resolution` uniform angles per free coordinate, then
/// coordinate descent starting at the grid spacing, shrinking the step by
/// [`REFINE_SHRINK`] for [`REFINE_ITERATIONS`] rounds.
pub fn s_bell_maximize(resolution: usize, search: BellSearch) -> Result<BellMax> {
    if resolution < 8 {
        return Err(Error::domain(format!("Bell search resolution must be at least 8, got {resolution}")));
    }
    let angles = uniform_angles(resolution);
    let expand = |free: &[f64]| -> [f64; 4] {
        match search {
            BellSearch::Free => [free[0], free[1], free[2], free[3]],
            BellSearch::Diagonal => [free[0]; 4],
        }
    };
    let n_free = match search {
        BellSearch::Free => 4,
        BellSearch::Diagonal => 1,
    };
    let value = |free: &[f64]| s_bell(&BellSetting::from_array(expand(free)));
    let mut evaluations = 0usize;
    let mut best = vec![0.0; n_free];
    let mut best_v = f64::NEG_INFINITY;
    let mut idx = vec![0usize; n_free];
    'grid: loop {
        let cand: Vec<f64> = idx.iter().map(|&i| angles[i]).collect();
        let v = value(&cand);
        evaluations += 1;
        if v > best_v {
            best_v = v;
            best = cand;
        }
        for d in (0..n_free).rev() {
            idx[d] += 1;
            if idx[d] < resolution {
                continue 'grid;
            }
            idx[d] = 0;
        }
        break;
    }
    let mut step = TAU / resolution as f64;
    for _ in 0..REFINE_ITERATIONS {
        for d in 0..n_free {
            loop {
                let mut improved = false;
                for sign in [1.0, -1.0] {
                    let mut cand = best.clone();
                    cand[d] += sign * step;
                    let v = value(&cand);
                    evaluations += 1;
                    if v > best_v {
                        best_v = v;
                        best = cand;
                        improved = true;
                    }
                }
                if !improved {
                    break;
                }
            }
        }
        step *= REFINE_SHRINK;
    }
    let setting = BellSetting::from_array(expand(&best).map(normalize_angle));
    Ok(BellMax {
        correlations: setting.correlations(),
        value: s_bell(&setting),
        setting,
        resolution,
        search,
        evaluations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourRow {
    /// `"grid"` or `"marked"`.
    pub kind: String,
    pub theta_a: f64,
    pub theta_b: f64,
    /// `theta_A - theta_B` reduced to `[0, 2pi)`; each contour is a line of
    /// constant delta, and `delta` and `2pi - delta` carry the same measure.
    pub delta: f64,
    pub mu: [f64; 4],
    pub e: f64,
}

/// The four marked points of the maximal setting:
/// `(a, b), (a', b), (a', b'), (a, b')`.
pub fn marked_points() -> [TorusPoint; 4] {
    let s = BellSetting::maximal();
    [
        TorusPoint::new(s.theta_a, s.theta_b),
        TorusPoint::new(s.theta_a_prime, s.theta_b),
        TorusPoint::new(s.theta_a_prime, s.theta_b_prime),
        TorusPoint::new(s.theta_a, s.theta_b_prime),
    ]
}

/// `resolution^2` rows on the uniform torus grid (theta_B fastest)
/// followed by the four marked points.
pub fn contour_export(resolution: usize) -> Result<Vec<ContourRow>> {
    if resolution < 2 {
        return Err(Error::domain(format!("contour resolution must be at least 2, got {resolution}")));
    }
    let row = |kind: &str, p: TorusPoint| ContourRow {
        kind: kind.into(),
        theta_a: p.theta_a,
        theta_b: p.theta_b,
        delta: normalize_angle(p.theta_a - p.theta_b),
        mu: torus_weights(p.theta_a, p.theta_b),
        e: correlation_e(p),
    };
    let angles = uniform_angles(resolution);
    let mut rows: Vec<ContourRow> = angles
        .iter()
        .flat_map(|&a| angles.iter().map(move |&b| (a, b)))
        .map(|(a, b)| row("grid", TorusPoint::new(a, b)))
        .collect();
    rows.extend(marked_points().into_iter().map(|p| row("marked", p)));
    Ok(rows)
}

pub const CONTOUR_HEADER: &str = "kind,theta_a,theta_b,delta,mu_11,mu_12,mu_21,mu_22,e";

/// Fixed column order, 17 significant digits, LF line endings.
pub fn write_contour_csv<W: Write>(rows: &[ContourRow], mut w: W) -> Result<()> {
    writeln!(w, "{CONTOUR_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.kind,
            fmt_f64(r.theta_a),
            fmt_f64(r.theta_b),
            fmt_f64(r.delta),
            fmt_f64(r.mu[0]),
            fmt_f64(r.mu[1]),
            fmt_f64(r.mu[2]),
            fmt_f64(r.mu[3]),
            fmt_f64(r.e)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    #[test]
    fn torus_examples() {
        assert_eq!(torus_ppm(TorusPoint::new(0.4, 0.4)).weights(), &[0.5, 0.0, 0.0, 0.5]);
        let q = torus_ppm(TorusPoint::new(FRAC_PI_2, 0.0));
        assert!(q.weights().iter().all(|w| (w - 0.25).abs() < 1e-15));
        let h = torus_ppm(TorusPoint::new(PI, 0.0));
        assert!((h.weight(1) - 0.5).abs() < 1e-15 && h.weight(0).abs() < 1e-15);
        assert_eq!(torus_layout().joint_space().labels(), &["1A1B", "1A2B", "2A1B", "2A2B"]);
    }

    #[test]
    fn correlation_examples() {
        assert!((correlation_e(TorusPoint::new(0.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((correlation_e(TorusPoint::new(FRAC_PI_4, 0.0)) - SQRT_2 / 2.0).abs() < 1e-15);
        assert!(correlation_e(TorusPoint::new(FRAC_PI_2, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn s_bell_examples() {
        assert!((s_bell(&BellSetting::from_abab(0.3, 0.3, 0.3, 0.3)) - 2.0).abs() < 1e-15);
        assert!((s_bell(&BellSetting::maximal()) - 2.0 * SQRT_2).abs() < 1e-12);
        let z = BellSetting::from_abab(0.0, FRAC_PI_2, FRAC_PI_2 * 2.0, FRAC_PI_2 * 3.0);
        // every pair differs by an odd multiple of pi/2
        assert!(s_bell(&z).abs() < 1e-15);
    }

    #[test]
    fn maximizer() {
        let m = s_bell_maximize(16, BellSearch::Free).unwrap();
        assert!(m.value >= 2.0 * SQRT_2 - 1e-6);
        for e in m.correlations {
            assert!((e.abs() - SQRT_2 / 2.0).abs() < 1e-6);
        }
        let d = s_bell_maximize(16, BellSearch::Diagonal).unwrap();
        assert!((d.value - 2.0).abs() < 1e-12);
        assert!(s_bell_maximize(4, BellSearch::Free).is_err());
    }

    #[test]
    fn contour_rows() {
        let rows = contour_export(3).unwrap();
        assert_eq!(rows.len(), 13);
        assert!(rows.iter().all(|r| (r.mu.iter().sum::<f64>() - 1.0).abs() < 1e-15));
        let marked: Vec<_> = rows.iter().filter(|r| r.kind == "marked").collect();
        assert!((marked[0].theta_a - 13.0 * FRAC_PI_8).abs() < 1e-15);
        let mut buf = Vec::new();
        write_contour_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 14);
        assert!(!text.contains('\r'));
    }
}
