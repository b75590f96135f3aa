//! Random generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tracerule::entangle::{Rotation3, SpherePairPoint, SpherePoint};
use tracerule::measure::{OutcomeSpace, ParamComponent, ParamDomain, ParamPoint, Ppm, ProbabilityMeasure};
use tracerule::quantum::linalg::{psd_function, CMatrix};
use tracerule::quantum::{DensityOperator, Povm};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normalized weights; roughly one entry in five is exactly zero.
pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1.0) })
            .collect();
        let s: f64 = w.iter().sum();
        if s > 1e-3 {
            return w.into_iter().map(|x| x / s).collect();
        }
    }
}

pub fn random_measure(rng: &mut ChaCha8Rng, space: &OutcomeSpace) -> ProbabilityMeasure {
    ProbabilityMeasure::new(space.clone(), random_weights(rng, space.len())).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `G G^dagger / Tr` for a `d x r` matrix `G` of random rank `r`.
pub fn random_density(rng: &mut ChaCha8Rng, d: usize) -> DensityOperator {
    let r = rng.gen_range(1..=d);
    let g = random_matrix(rng, d, r);
    let m = &g * g.adjoint();
    let t = m.trace();
    DensityOperator::new(hermitize(m / t)).unwrap()
}

/// `M_i = S^{-1/2} A_i S^{-1/2}` with random PSD `A_i` and `S = sum A_i`.
pub fn random_povm(rng: &mut ChaCha8Rng, d: usize, space: &OutcomeSpace) -> Povm {
    let parts: Vec<CMatrix> = (0..space.len())
        .map(|_| {
            let b = random_matrix(rng, d, d);
            &b * b.adjoint()
        })
        .collect();
    let s = parts.iter().fold(CMatrix::zeros(d, d), |acc, a| acc + a);
    let s_inv_half = psd_function(&hermitize(s), |x| 1.0 / x.sqrt(), "test POVM normalizer").unwrap();
    let elements = parts
        .iter()
        .map(|a| hermitize(&s_inv_half * a * &s_inv_half))
        .collect();
    Povm::from_matrices(space.clone(), elements).unwrap()
}

/// Domain `prep x meas` of two finite sets.
pub fn finite_domain(n_prep: usize, n_meas: usize) -> ParamDomain {
    ParamDomain::new(vec![
        ParamComponent::finite_set("prep", (0..n_prep).map(|i| format!("p{i}"))),
        ParamComponent::finite_set("meas", (0..n_meas).map(|i| format!("m{i}"))),
    ])
    .unwrap()
}

/// Random tabulated PPM on every point of [`finite_domain`].
pub fn random_table(rng: &mut ChaCha8Rng, n_prep: usize, n_meas: usize, n_out: usize) -> Ppm {
    let domain = finite_domain(n_prep, n_meas);
    let space = OutcomeSpace::numbered(n_out).unwrap();
    let mut entries = Vec::new();
    for p in 0..n_prep {
        for m in 0..n_meas {
            entries.push((
                domain.point(vec![p as f64, m as f64]).unwrap(),
                random_measure(rng, &space),
            ));
        }
    }
    Ppm::tabulated(domain, space, entries).unwrap()
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    Vector3::new(s * phi.cos(), s * phi.sin(), z)
}

pub fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation3 {
    let axis = random_unit(rng);
    Rotation3::about_axis(&axis, rng.gen_range(0.0..std::f64::consts::TAU)).unwrap()
}

pub fn random_sphere_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    SpherePoint::from_vector(&random_unit(rng)).unwrap()
}

pub fn random_pair(rng: &mut ChaCha8Rng) -> SpherePairPoint {
    SpherePairPoint::new(random_sphere_point(rng), random_sphere_point(rng))
}

pub fn point(coords: &[f64]) -> ParamPoint {
    ParamPoint::raw(coords.to_vec())
}

/// Every set partition of `{0, .., n-1}`, as lists of blocks.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new()];
    for x in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q: Vec<Vec<usize>> = p.clone();
                q[b].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// `sup` over partitions of `1/2 sum_blocks |mu(B) - nu(B)|`, by enumeration.
pub fn partition_supremum(mu: &[f64], nu: &[f64]) -> f64 {
    set_partitions(mu.len())
        .iter()
        .map(|p| {
            0.5 * p
                .iter()
                .map(|b| b.iter().map(|&i| mu[i] - nu[i]).sum::<f64>().abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}
