//! Measure-level relations: event probabilities, the L1 metric, refinement,
//! envelopment, and the sup-distance between PPMs.

use serde::{Deserialize, Serialize};

use super::outcome::{Event, OutcomeSurjection, ProbabilityMeasure};
use super::param::{ParamGrid, ParamInjection, ParamPoint};
use super::ppm::Ppm;
use crate::error::{Error, Result};
use crate::report::{CheckReport, CheckRow};

pub fn event_probability(mu: &ProbabilityMeasure, omega: &Event) -> Result<f64> {
    let n = mu.space().len();
    omega.members().iter().try_fold(0.0, |acc, &i| {
        if i < n {
            Ok(acc + mu.weight(i))
        } else {
            Err(Error::domain(format!("event index {i} outside outcome space of size {n}")))
        }
    })
}

/// `1/2 sum_x |mu(x) - nu(x)|`, which on a finite outcome space equals the
/// supremum over partitions (the partition into singletons attains it).
pub fn l1_distance(mu: &ProbabilityMeasure, nu: &ProbabilityMeasure) -> Result<f64> {
    mu.space().ensure_same(nu.space(), "l1_distance")?;
    Ok(l1_weights(mu.weights(), nu.weights()))
}

pub(crate) fn l1_weights(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Largest `|mu'(xi^-1(w)) - mu(w)|` over coarse outcomes `w`.
pub fn refinement_residual(mu_prime: &ProbabilityMeasure, xi: &OutcomeSurjection, mu: &ProbabilityMeasure) -> Result<f64> {
    mu_prime.space().ensure_same(xi.from_space(), "refines (fine side)")?;
    mu.space().ensure_same(xi.to_space(), "refines (coarse side)")?;
    let pushed = xi.push_forward(mu_prime)?;
    Ok(pushed
        .weights()
        .iter()
        .zip(mu.weights())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// True iff `mu_prime` refines `mu` through `xi`: preimage weights match
/// the coarse weights within `tol` on every singleton.
pub fn refines(mu_prime: &ProbabilityMeasure, xi: &OutcomeSurjection, mu: &ProbabilityMeasure, tol: f64) -> Result<bool> {
    Ok(refinement_residual(mu_prime, xi, mu)? <= tol)
}

/// Checks that `mu_prime` at `big_xi(k)` refines `mu` at `k` for every `k` in
/// the grid. The report's rows carry the refinement residual per point.
pub fn envelops(
    mu_prime: &Ppm,
    big_xi: &ParamInjection,
    xi: &OutcomeSurjection,
    mu: &Ppm,
    grid: &ParamGrid,
    tol: f64,
) -> Result<CheckReport> {
    if big_xi.to_domain() != mu_prime.domain() {
        return Err(Error::domain("injection target is not the enveloping PPM's domain"));
    }
    if big_xi.from_domain() != mu.domain() || grid.domain() != mu.domain() {
        return Err(Error::domain("grid and injection source must be the enveloped PPM's domain"));
    }
    let rows = grid
        .points()
        .iter()
        .map(|k| {
            let image = big_xi.apply(k)?;
            let violation = refinement_residual(&mu_prime.eval(&image)?, xi, &mu.eval(k)?)?;
            Ok(CheckRow {
                point: k.clone(),
                violation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_rows("envelopment", tol, rows))
}

/// Grid estimate of `sup_k L1(mu^(k), nu^(k))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PpmDistance {
    pub value: f64,
    pub argmax: ParamPoint,
    pub grid_points: usize,
}

pub fn ppm_distance(mu: &Ppm, nu: &Ppm, grid: &ParamGrid) -> Result<PpmDistance> {
    mu.space().ensure_same(nu.space(), "ppm_distance")?;
    if grid.is_empty() {
        return Err(Error::domain("ppm_distance needs a nonempty grid"));
    }
    let mut best = PpmDistance {
        value: -1.0,
        argmax: grid.points()[0].clone(),
        grid_points: grid.len(),
    };
    for k in grid.points() {
        let d = l1_distance(&mu.eval(k)?, &nu.eval(k)?)?;
        if d > best.value {
            best.value = d;
            best.argmax = k.clone();
        }
    }
    Ok(best)
}

/// Whether two points lie in the same level set: their measures are within
/// `tol` in L1.
pub fn level_set_equal(mu: &Ppm, k: &ParamPoint, k_prime: &ParamPoint, tol: f64) -> Result<bool> {
    Ok(l1_distance(&mu.eval(k)?, &mu.eval(k_prime)?)? <= tol)
}
