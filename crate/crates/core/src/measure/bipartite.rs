//! Two-party structure on a PPM: which parameters and outcome factors belong
//! to each side, marginals, and the grid checks built on them.

use serde::{Deserialize, Serialize};

use super::outcome::{OutcomeSpace, ProbabilityMeasure};
use super::param::{ParamDomain, ParamGrid, ParamPoint};
use super::ppm::Ppm;
use super::relations::{l1_distance, l1_weights};
use crate::error::{Error, Result};
use crate::report::{CheckReport, CheckRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Split of a domain's components and of a product outcome space
/// `Omega_A x Omega_B` (B index varying fastest) between two parties.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteLayout {
    domain: ParamDomain,
    a_components: Vec<usize>,
    b_components: Vec<usize>,
    space_a: OutcomeSpace,
    space_b: OutcomeSpace,
    joint: OutcomeSpace,
}

impl BipartiteLayout {
    pub fn new(
        domain: ParamDomain,
        a_components: Vec<usize>,
        b_components: Vec<usize>,
        space_a: OutcomeSpace,
        space_b: OutcomeSpace,
    ) -> Result<Self> {
        let n = domain.components().len();
        let mut seen = vec![0u8; n];
        for &i in a_components.iter().chain(&b_components) {
            *seen
                .get_mut(i)
                .ok_or_else(|| Error::domain(format!("layout component {i} out of range")))? += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err(Error::domain("layout must assign every component to exactly one side"));
        }
        let joint = space_a.product(&space_b)?;
        Ok(BipartiteLayout {
            domain,
            a_components,
            b_components,
            space_a,
            space_b,
            joint,
        })
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    pub fn joint_space(&self) -> &OutcomeSpace {
        &self.joint
    }

    pub fn space(&self, side: Side) -> &OutcomeSpace {
        match side {
            Side::A => &self.space_a,
            Side::B => &self.space_b,
        }
    }

    pub fn components(&self, side: Side) -> &[usize] {
        match side {
            Side::A => &self.a_components,
            Side::B => &self.b_components,
        }
    }

    pub fn side_domain(&self, side: Side) -> Result<ParamDomain> {
        self.domain.subdomain(self.components(side))
    }

    /// Full parameter point from the two sides' points.
    pub fn join(&self, k_a: &ParamPoint, k_b: &ParamPoint) -> Result<ParamPoint> {
        self.domain
            .assemble(&[(&self.a_components, k_a), (&self.b_components, k_b)])
    }

    pub fn split(&self, k: &ParamPoint) -> Result<(ParamPoint, ParamPoint)> {
        Ok((
            self.domain.project(k, &self.a_components)?,
            self.domain.project(k, &self.b_components)?,
        ))
    }

    fn check_ppm(&self, mu: &Ppm) -> Result<()> {
        if mu.domain() != &self.domain {
            return Err(Error::domain("PPM domain does not match layout"));
        }
        mu.space().ensure_same(&self.joint, "bipartite layout")
    }

    fn check_grid(&self, grid: &ParamGrid, side: Side) -> Result<()> {
        if grid.domain() != &self.side_domain(side)? {
            return Err(Error::domain(format!("grid is not on side {side:?}'s sub-domain")));
        }
        Ok(())
    }

    fn marginal_weights(&self, joint: &[f64], side: Side) -> Vec<f64> {
        let nb = self.space_b.len();
        match side {
            Side::A => joint.chunks(nb).map(|row| row.iter().sum()).collect(),
            Side::B => (0..nb).map(|j| joint.iter().skip(j).step_by(nb).sum()).collect(),
        }
    }
}

/// Marginal on one side's factor space, summing over the other factor.
pub fn marginal(mu: &ProbabilityMeasure, layout: &BipartiteLayout, side: Side) -> Result<ProbabilityMeasure> {
    mu.space().ensure_same(&layout.joint, "marginal")?;
    ProbabilityMeasure::new(layout.space(side).clone(), layout.marginal_weights(mu.weights(), side))
}

/// What Bob observes when deciding between two of Alice's parameter values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeparabilityView {
    /// Bob's marginal on `Omega_B`.
    #[default]
    BobMarginal,
    /// The full joint measure.
    Joint,
}

/// Distance Bob can use to tell `k_a` from `k_a_prime` at his setting `k_b`.
pub fn separation(
    mu: &Ppm,
    layout: &BipartiteLayout,
    k_a: &ParamPoint,
    k_a_prime: &ParamPoint,
    k_b: &ParamPoint,
    view: SeparabilityView,
) -> Result<f64> {
    layout.check_ppm(mu)?;
    let m1 = mu.eval(&layout.join(k_a, k_b)?)?;
    let m2 = mu.eval(&layout.join(k_a_prime, k_b)?)?;
    match view {
        SeparabilityView::BobMarginal => l1_distance(&marginal(&m1, layout, Side::B)?, &marginal(&m2, layout, Side::B)?),
        SeparabilityView::Joint => l1_distance(&m1, &m2),
    }
}

/// `eps <= D(mu^(kA,kB), mu^(kA',kB))` on the chosen view.
pub fn epsilon_separable(
    mu: &Ppm,
    layout: &BipartiteLayout,
    k_a: &ParamPoint,
    k_a_prime: &ParamPoint,
    k_b: &ParamPoint,
    eps: f64,
    view: SeparabilityView,
) -> Result<bool> {
    Ok(eps <= separation(mu, layout, k_a, k_a_prime, k_b, view)?)
}

/// Measures on `gridA x gridB`, indexed `a * |B| + b`.
struct JointTable<'a> {
    layout: &'a BipartiteLayout,
    grid_a: &'a ParamGrid,
    grid_b: &'a ParamGrid,
    weights: Vec<Vec<f64>>,
}

impl<'a> JointTable<'a> {
    fn build(mu: &Ppm, layout: &'a BipartiteLayout, grid_a: &'a ParamGrid, grid_b: &'a ParamGrid) -> Result<Self> {
        layout.check_ppm(mu)?;
        layout.check_grid(grid_a, Side::A)?;
        layout.check_grid(grid_b, Side::B)?;
        let mut weights = Vec::with_capacity(grid_a.len() * grid_b.len());
        for ka in grid_a.points() {
            for kb in grid_b.points() {
                weights.push(mu.eval(&layout.join(ka, kb)?)?.weights().to_vec());
            }
        }
        Ok(JointTable {
            layout,
            grid_a,
            grid_b,
            weights,
        })
    }

    fn nb(&self) -> usize {
        self.grid_b.len()
    }

    fn at(&self, a: usize, b: usize) -> &[f64] {
        &self.weights[a * self.nb() + b]
    }

    fn point(&self, a: usize, b: usize) -> Result<ParamPoint> {
        self.layout.join(&self.grid_a.points()[a], &self.grid_b.points()[b])
    }

    fn marginals(&self, side: Side) -> Vec<Vec<f64>> {
        self.weights
            .iter()
            .map(|w| self.layout.marginal_weights(w, side))
            .collect()
    }
}

/// For every `k_A`, side-A marginals must agree across `gridB`, and
/// symmetrically for side B. Row violations are L1 distances to the first
/// grid point of the varied side.
pub fn no_signaling_check(
    mu: &Ppm,
    layout: &BipartiteLayout,
    grid_a: &ParamGrid,
    grid_b: &ParamGrid,
    tol: f64,
) -> Result<CheckReport> {
    let t = JointTable::build(mu, layout, grid_a, grid_b)?;
    let ma = t.marginals(Side::A);
    let mb = t.marginals(Side::B);
    let nb = t.nb();
    let mut rows = Vec::with_capacity(t.weights.len());
    let mut worst: Option<(f64, String)> = None;
    for a in 0..grid_a.len() {
        for b in 0..nb {
            let va = l1_weights(&ma[a * nb + b], &ma[a * nb]);
            let vb = l1_weights(&mb[a * nb + b], &mb[b]);
            let point = t.point(a, b)?;
            if worst.as_ref().is_none_or(|(w, _)| va.max(vb) > *w) {
                let what = if va >= vb {
                    format!(
                        "side-A marginal at k_A={} changes between k_B={} and k_B={}",
                        grid_a.points()[a],
                        grid_b.points()[0],
                        grid_b.points()[b]
                    )
                } else {
                    format!(
                        "side-B marginal at k_B={} changes between k_A={} and k_A={}",
                        grid_b.points()[b],
                        grid_a.points()[0],
                        grid_a.points()[a]
                    )
                };
                worst = Some((va.max(vb), what));
            }
            rows.push(CheckRow {
                point,
                violation: va.max(vb),
            });
        }
    }
    let report = CheckReport::from_rows("no_signaling", tol, rows);
    Ok(match worst {
        Some((w, what)) if w > 0.0 => report.with_worst(what),
        _ => report,
    })
}

/// One compensating move found by the local-reach search: after the
/// `moved` side changes to grid index `moved_to`, the other side's grid index
/// `witness` restores the measure at `(k_a, k_b)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReachWitness {
    pub moved: Side,
    pub k_a: usize,
    pub k_b: usize,
    pub moved_to: usize,
    pub witness: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalReachReport {
    pub report: CheckReport,
    pub witnesses: Vec<ReachWitness>,
    /// First triple for which no compensating point was found.
    pub failing: Option<ReachWitness>,
}

/// Local reach on grids: for every `(k_A, k_B, k_B')` some `k_A'` in `gridA`
/// gives `mu^(k_A', k_B')` equal to `mu^(k_A, k_B)` within `tol`, and
/// symmetrically with the roles of A and B exchanged.
pub fn local_reach_check(
    mu: &Ppm,
    layout: &BipartiteLayout,
    grid_a: &ParamGrid,
    grid_b: &ParamGrid,
    tol: f64,
) -> Result<LocalReachReport> {
    let t = JointTable::build(mu, layout, grid_a, grid_b)?;
    let (na, nb) = (grid_a.len(), grid_b.len());
    let mut witnesses = Vec::new();
    let mut failing = None;
    let mut rows = Vec::with_capacity(na * nb);
    for a in 0..na {
        for b in 0..nb {
            let target = t.at(a, b);
            let mut row_worst = 0.0_f64;
            for (moved, n_moved, n_wit) in [(Side::B, nb, na), (Side::A, na, nb)] {
                for m in 0..n_moved {
                    let (best, residual) = (0..n_wit)
                        .map(|w| {
                            let cand = match moved {
                                Side::B => t.at(w, m),
                                Side::A => t.at(m, w),
                            };
                            (w, l1_weights(target, cand))
                        })
                        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
                    let entry = ReachWitness {
                        moved,
                        k_a: a,
                        k_b: b,
                        moved_to: m,
                        witness: best,
                        residual,
                    };
                    row_worst = row_worst.max(residual);
                    if residual <= tol {
                        witnesses.push(entry);
                    } else if failing.is_none() {
                        failing = Some(entry);
                    }
                }
            }
            rows.push(CheckRow {
                point: t.point(a, b)?,
                violation: row_worst,
            });
        }
    }
    let mut report = CheckReport::from_rows("local_reach", tol, rows);
    if let Some(f) = &failing {
        let (moved_grid, other) = match f.moved {
            Side::B => (grid_b, "k_A'"),
            Side::A => (grid_a, "k_B'"),
        };
        report = report.with_worst(format!(
            "no {other} restores the measure at (k_A={}, k_B={}) after side {:?} moves to {}",
            grid_a.points()[f.k_a],
            grid_b.points()[f.k_b],
            f.moved,
            moved_grid.points()[f.moved_to]
        ));
    }
    Ok(LocalReachReport {
        report,
        witnesses,
        failing,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalInvarianceReport {
    pub report: CheckReport,
    /// Marginals at the first grid point, against which all others are compared.
    pub marginal_a: Vec<f64>,
    pub marginal_b: Vec<f64>,
}

/// Both one-sided marginals constant over `gridA x gridB` within `tol`.
pub fn marginal_invariance_check(
    mu: &Ppm,
    layout: &BipartiteLayout,
    grid_a: &ParamGrid,
    grid_b: &ParamGrid,
    tol: f64,
) -> Result<MarginalInvarianceReport> {
    let t = JointTable::build(mu, layout, grid_a, grid_b)?;
    let ma = t.marginals(Side::A);
    let mb = t.marginals(Side::B);
    let nb = t.nb();
    let mut rows = Vec::with_capacity(ma.len());
    for a in 0..grid_a.len() {
        for b in 0..nb {
            let i = a * nb + b;
            rows.push(CheckRow {
                point: t.point(a, b)?,
                violation: l1_weights(&ma[i], &ma[0]).max(l1_weights(&mb[i], &mb[0])),
            });
        }
    }
    Ok(MarginalInvarianceReport {
        report: CheckReport::from_rows("marginal_invariance", tol, rows),
        marginal_a: ma[0].clone(),
        marginal_b: mb[0].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{uniform_angles, ParamComponent};

    fn torus_layout() -> BipartiteLayout {
        let d = ParamDomain::new(vec![ParamComponent::circle("theta_a"), ParamComponent::circle("theta_b")]).unwrap();
        BipartiteLayout::new(
            d,
            vec![0],
            vec![1],
            OutcomeSpace::new(["1A", "2A"]).unwrap(),
            OutcomeSpace::new(["1B", "2B"]).unwrap(),
        )
        .unwrap()
    }

    fn side_grid(layout: &BipartiteLayout, side: Side, n: usize) -> ParamGrid {
        ParamGrid::cartesian(layout.side_domain(side).unwrap(), &[uniform_angles(n)]).unwrap()
    }

    fn joint(layout: &BipartiteLayout, w: [f64; 4]) -> ProbabilityMeasure {
        ProbabilityMeasure::new(layout.joint_space().clone(), w.to_vec()).unwrap()
    }

    #[test]
    fn layout_must_partition() {
        let l = torus_layout();
        let sa = l.space(Side::A).clone();
        let sb = l.space(Side::B).clone();
        assert!(BipartiteLayout::new(l.domain().clone(), vec![0], vec![0], sa.clone(), sb.clone()).is_err());
        assert!(BipartiteLayout::new(l.domain().clone(), vec![0], vec![], sa, sb).is_err());
    }

    #[test]
    fn marginal_examples() {
        let l = torus_layout();
        let p = [0.3, 0.7];
        let q = [0.4, 0.6];
        let prod = joint(&l, [p[0] * q[0], p[0] * q[1], p[1] * q[0], p[1] * q[1]]);
        let ma = marginal(&prod, &l, Side::A).unwrap();
        assert!((ma.weight(0) - 0.3).abs() < 1e-15 && (ma.weight(1) - 0.7).abs() < 1e-15);
        let corr = joint(&l, [0.5, 0.0, 0.0, 0.5]);
        assert_eq!(marginal(&corr, &l, Side::B).unwrap().weights(), [0.5, 0.5]);
        let wrong = ProbabilityMeasure::uniform(OutcomeSpace::numbered(4).unwrap());
        assert!(marginal(&wrong, &l, Side::A).is_err());
    }

    #[test]
    fn signaling_counterexample_is_reported() {
        let l = torus_layout();
        // Side-A marginal (cos^2 theta_b, sin^2 theta_b) depends on Bob's setting.
        let ppm = Ppm::closed_form("signal", l.domain().clone(), l.joint_space().clone(), |k| {
            let c = k.coord(1).cos().powi(2);
            Ok(vec![c / 2.0, c / 2.0, (1.0 - c) / 2.0, (1.0 - c) / 2.0])
        });
        let ga = side_grid(&l, Side::A, 4);
        let gb = side_grid(&l, Side::B, 4);
        let r = no_signaling_check(&ppm, &l, &ga, &gb, 1e-10).unwrap();
        assert!(!r.passed);
        assert!((r.max_violation - 1.0).abs() < 1e-12);
        assert!(r.worst.unwrap().contains("side-A marginal"));
    }

    #[test]
    fn reach_fails_for_ppm_varying_only_in_k_a() {
        let l = torus_layout();
        let ppm = Ppm::closed_form("a-only", l.domain().clone(), l.joint_space().clone(), |k| {
            let c = k.coord(0).cos().powi(2);
            Ok(vec![c / 2.0, c / 2.0, (1.0 - c) / 2.0, (1.0 - c) / 2.0])
        });
        let ga = side_grid(&l, Side::A, 4);
        let gb = side_grid(&l, Side::B, 4);
        let r = local_reach_check(&ppm, &l, &ga, &gb, 1e-10).unwrap();
        // Changing k_A changes the measure, and no k_B' can compensate.
        assert!(!r.report.passed);
        assert_eq!(r.failing.as_ref().unwrap().moved, Side::A);
        // No-signaling holds, but marginal invariance does not: the converse of
        // the local-reach implication is not claimed.
        assert!(no_signaling_check(&ppm, &l, &ga, &gb, 1e-10).unwrap().passed);
        assert!(!marginal_invariance_check(&ppm, &l, &ga, &gb, 1e-10).unwrap().report.passed);
    }

    #[test]
    fn separability_of_disjoint_support() {
        // A channel in which Alice's bit is copied to Bob's outcome.
        let l = torus_layout();
        let ppm = Ppm::closed_form("copy", l.domain().clone(), l.joint_space().clone(), |k| {
            Ok(if k.coord(0) < 1.0 {
                vec![0.5, 0.0, 0.5, 0.0]
            } else {
                vec![0.0, 0.5, 0.0, 0.5]
            })
        });
        let a0 = ParamPoint::raw(vec![0.0]);
        let a1 = ParamPoint::raw(vec![2.0]);
        let b = ParamPoint::raw(vec![0.0]);
        assert!(epsilon_separable(&ppm, &l, &a0, &a1, &b, 1.0, SeparabilityView::BobMarginal).unwrap());
        assert!(!epsilon_separable(&ppm, &l, &a0, &a0, &b, 1e-9, SeparabilityView::BobMarginal).unwrap());
        assert_eq!(separation(&ppm, &l, &a0, &a1, &b, SeparabilityView::Joint).unwrap(), 1.0);
    }
}
