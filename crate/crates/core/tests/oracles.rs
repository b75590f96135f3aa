//! Worked examples with independently computed expected values.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI, SQRT_2, TAU};

use nalgebra::Vector3;
use num_complex::Complex64;
use tracerule::bb84::{
    alpha_family, alpha_grid, angular_frequency, beta_ppm, envelopment_witness, eve_basis_for, gaussian_spectrum,
    mismatch_attack, polarization_weights, spectral_overlap, BetaMeas, BetaPrep, FrequencyGrid, LaserBank,
    PulseConvention, SpectralBasis, DEFAULT_GRID_POINTS, DEFAULT_THRESHOLD,
};
use tracerule::entangle::{
    bell_state, elliptical_povm, linear_povm, marked_points, orbit_rotation, s_bell, s_bell_maximize, side_space,
    singlet_state, sphere_ppm, torus_family, torus_grid, torus_layout, torus_ppm, torus_side_grid, BellSearch,
    BellSetting, OrbitResult, Rotation3, SpherePairPoint, SpherePoint, TorusPoint, ORBIT_MAP,
};
use tracerule::info::{
    conditional_ppm, holevo_chi, measurement_diagonal_model, mutual_information, shannon_entropy,
    tightened_bound, tightened_bound_with, ChannelModel,
};
use tracerule::measure::{
    epsilon_separable, l1_distance, level_set_equal, local_reach_check, marginal, ppm_distance, refines,
    uniform_angles, OutcomeSpace, OutcomeSurjection, ParamComponent, ParamDomain, ParamGrid, Ppm,
    ProbabilityMeasure, SeparabilityView, Side,
};
use tracerule::quantum::linalg::CMatrix;
use tracerule::quantum::{
    born_probability, canonical_model, model_generates, overlap, qubit_linear_state, split_canonical_model,
    von_neumann_entropy, DensityOperator, DetectionOperator, Ket, Povm, Split,
};

use common::*;

const EXACT: f64 = 1e-12;

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol:e})");
}

fn measure(weights: &[f64]) -> ProbabilityMeasure {
    ProbabilityMeasure::new(OutcomeSpace::numbered(weights.len()).unwrap(), weights.to_vec()).unwrap()
}

fn bb84_states() -> Vec<DensityOperator> {
    [0.0, FRAC_PI_4, 2.0 * FRAC_PI_4, 3.0 * FRAC_PI_4]
        .iter()
        .map(|&t| DensityOperator::pure(&qubit_linear_state(t)))
        .collect()
}

fn bb84_channel() -> ChannelModel {
    let povm = Povm::binary_projective(OutcomeSpace::numbered(2).unwrap(), &qubit_linear_state(0.0)).unwrap();
    ChannelModel::new(vec![0.25; 4], bb84_states(), povm).unwrap()
}

#[test]
fn bernoulli_distance_matches_partition_supremum() {
    let (a, b) = (measure(&[0.75, 0.25]), measure(&[0.25, 0.75]));
    close(l1_distance(&a, &b).unwrap(), 0.5, EXACT);
    close(partition_supremum(a.weights(), b.weights()), 0.5, EXACT);
}

#[test]
fn coarse_graining_first_index_refines() {
    let fine = OutcomeSpace::new(["00", "01", "10", "11"]).unwrap();
    let coarse = OutcomeSpace::new(["0", "1"]).unwrap();
    let xi = OutcomeSurjection::from_labels(fine.clone(), coarse.clone(), &["0", "0", "1", "1"]).unwrap();
    let mu_prime = ProbabilityMeasure::new(fine.clone(), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    let mu = ProbabilityMeasure::new(coarse.clone(), vec![0.3, 0.7]).unwrap();
    assert!(refines(&mu_prime, &xi, &mu, EXACT).unwrap());
    assert!(refines(&ProbabilityMeasure::uniform(fine), &xi, &ProbabilityMeasure::uniform(coarse.clone()), EXACT).unwrap());
    let off = ProbabilityMeasure::new(coarse, vec![0.4, 0.6]).unwrap();
    assert!(!refines(&mu_prime, &xi, &off, EXACT).unwrap());
}

fn hg_basis(center: f64, sigma: f64) -> SpectralBasis {
    let grid = FrequencyGrid::new(center - 14.0 * sigma, center + 14.0 * sigma, DEFAULT_GRID_POINTS).unwrap();
    SpectralBasis::hermite_gauss(&grid, center, sigma, 6).unwrap()
}

#[test]
fn beta_envelops_alpha_on_first_mode() {
    let w0 = angular_frequency(1.5e-6);
    let sigma = PulseConvention::default().sigma_omega(1e-9);
    let circle = ParamDomain::new(vec![ParamComponent::circle("theta")]).unwrap();
    let grid = ParamGrid::cartesian(circle, &[uniform_angles(8)]).unwrap();
    let w = envelopment_witness(&hg_basis(w0, sigma), &grid, 1e-10).unwrap();
    assert!(w.passed, "deviation {:e}", w.max_violation);
    assert_eq!(w.grid_points, 64);
}

#[test]
fn detuned_spectrum_breaks_envelopment() {
    let w0 = angular_frequency(1.5e-6);
    let sigma = PulseConvention::default().sigma_omega(1e-9);
    let basis = hg_basis(w0, sigma);
    let (profile, _) = gaussian_spectrum(w0 + sigma, 1e-9, basis.grid()).unwrap();
    let prep = BetaPrep { theta: 0.0, profile };
    let b = beta_ppm(&prep, BetaMeas { theta_prime: 0.0, mode: 0 }, &basis).unwrap();
    // |<f, f_1>|^2 for Gaussians one sigma apart.
    close(b.spectral, (-0.25_f64).exp(), 1e-6);
    let [p1, _] = polarization_weights(0.0, 0.0);
    assert!((b.w1 - p1).abs() > 0.1);
}

#[test]
fn gaussian_overlap_closed_form() {
    let sigma = PulseConvention::default().sigma_omega(1e-9);
    let w0 = angular_frequency(1.5e-6);
    let grid = FrequencyGrid::new(w0 - 20.0 * sigma, w0 + 30.0 * sigma, 4096).unwrap();
    let f = gaussian_spectrum(w0, 1e-9, &grid).unwrap().0;
    for delta in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let g = gaussian_spectrum(w0 + delta * sigma, 1e-9, &grid).unwrap().0;
        let expected = (-delta * delta / 8.0).exp();
        close(spectral_overlap(&f, &g).unwrap().norm(), expected, 1e-6);
    }
    let far = gaussian_spectrum(w0 + 10.0 * sigma, 1e-9, &grid).unwrap().0;
    assert!(spectral_overlap(&f, &far).unwrap().norm_sqr() < 1e-5);
}

#[test]
fn torus_against_half_turn_shift_has_distance_one() {
    let torus = torus_family();
    let shifted = Ppm::closed_form("shifted", torus.domain().clone(), torus.space().clone(), |k| {
        Ok(torus_ppm(TorusPoint::new(k.coord(0), k.coord(1) + PI)).weights().to_vec())
    });
    let d = ppm_distance(&torus, &shifted, &torus_grid(8).unwrap()).unwrap();
    close(d.value, 1.0, EXACT);
    assert_eq!(d.grid_points, 64);
}

#[test]
fn bob_cannot_separate_alice_settings() {
    let torus = torus_family();
    let layout = torus_layout();
    let a = torus_side_grid(Side::A, 6).unwrap();
    let b = torus_side_grid(Side::B, 6).unwrap();
    for ka in a.points() {
        for ka2 in a.points() {
            for kb in b.points() {
                let sep = epsilon_separable(&torus, &layout, ka, ka2, kb, 1e-6, SeparabilityView::BobMarginal).unwrap();
                assert!(!sep);
            }
        }
    }
}

#[test]
fn torus_level_sets_follow_angle_difference() {
    let torus = torus_family();
    assert!(level_set_equal(&torus, &point(&[0.3, 0.1]), &point(&[1.0, 0.8]), EXACT).unwrap());
    assert!(level_set_equal(&torus, &point(&[0.2, 0.0]), &point(&[0.0, 0.2]), EXACT).unwrap());
    assert!(!level_set_equal(&torus, &point(&[0.3, 0.1]), &point(&[0.3, 0.9]), EXACT).unwrap());
}

#[test]
fn torus_marginals_are_fair_coins() {
    let torus = torus_family();
    let layout = torus_layout();
    for k in torus_grid(7).unwrap().points() {
        let mu = torus.eval(k).unwrap();
        for side in [Side::A, Side::B] {
            let m = marginal(&mu, &layout, side).unwrap();
            close(m.weight(0), 0.5, EXACT);
            close(m.weight(1), 0.5, EXACT);
        }
    }
}

#[test]
fn torus_local_reach_on_uniform_grids() {
    let a = torus_side_grid(Side::A, 12).unwrap();
    let b = torus_side_grid(Side::B, 12).unwrap();
    let r = local_reach_check(&torus_family(), &torus_layout(), &a, &b, 1e-10).unwrap();
    assert!(r.report.passed, "violation {:e}", r.report.max_violation);
}

#[test]
fn polarization_overlap_is_one_half() {
    let rho = DensityOperator::pure(&qubit_linear_state(0.0));
    let sigma = DensityOperator::pure(&qubit_linear_state(FRAC_PI_4));
    close(overlap(&rho, &sigma).unwrap(), 0.5, EXACT);
    let m = DetectionOperator::projector(&qubit_linear_state(FRAC_PI_4));
    close(born_probability(&rho, &m).unwrap(), 0.5, EXACT);
    let [w1, w0] = polarization_weights(0.0, FRAC_PI_4);
    close(w1, 0.5, EXACT);
    close(w0, 0.5, EXACT);
}

#[test]
fn bb84_mixture_has_one_bit() {
    let states = bb84_states();
    let mix = DensityOperator::mixture(&states.iter().map(|s| (0.25, s)).collect::<Vec<_>>()).unwrap();
    close(von_neumann_entropy(&mix), 1.0, EXACT);
    close(holevo_chi(&[0.25; 4], &states).unwrap(), 1.0, EXACT);
    close(holevo_chi(&[1.0], &states[..1]).unwrap(), 0.0, EXACT);
}

#[test]
fn binary_entropy_value() {
    let h = shannon_entropy(&measure(&[0.75, 0.25]));
    let closed = -(0.75 * 0.75_f64.log2() + 0.25 * 0.25_f64.log2());
    close(h, closed, EXACT);
    close(h, 0.811_278_124_459_132_9, EXACT);
}

#[test]
fn bb84_conditional_rows_and_information() {
    let ch = bb84_channel();
    let ppm = conditional_ppm(&ch).unwrap();
    let rows: Vec<Vec<f64>> = ppm.table().unwrap().iter().map(|(_, m)| m.weights().to_vec()).collect();
    let expected = [[1.0, 0.0], [0.5, 0.5], [0.0, 1.0], [0.5, 0.5]];
    for (r, e) in rows.iter().zip(expected) {
        close(r[0], e[0], EXACT);
        close(r[1], e[1], EXACT);
    }
    close(mutual_information(&ch).unwrap(), 0.5, EXACT);
    let rep = tightened_bound(&ch).unwrap();
    close(rep.chi, 1.0, EXACT);
    assert_eq!(rep.models[1].model, "canonical");
    close(rep.models[1].chi, 2.0, EXACT);
    close(rep.tightened_chi, 1.0, EXACT);
    assert!(rep.passed());
}

fn block_projector(d: usize, block: std::ops::Range<usize>, weight: f64) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i == j && block.contains(&i) {
            Complex64::new(weight, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

#[test]
fn redundant_block_ensemble_bound() {
    // Two 8-dim states, maximally mixed on complementary 4-dim blocks, read
    // by a noisy block detector.
    let states = vec![
        DensityOperator::new(block_projector(8, 0..4, 0.25)).unwrap(),
        DensityOperator::new(block_projector(8, 4..8, 0.25)).unwrap(),
    ];
    let m1 = block_projector(8, 0..4, 0.9) + block_projector(8, 4..8, 0.1);
    let m2 = CMatrix::identity(8, 8) - &m1;
    let povm = Povm::from_matrices(OutcomeSpace::numbered(2).unwrap(), vec![m1, m2]).unwrap();
    let ch = ChannelModel::new(vec![0.5, 0.5], states, povm).unwrap();
    let info = 1.0 - shannon_entropy(&measure(&[0.9, 0.1]));

    let rep = tightened_bound(&ch).unwrap();
    close(rep.mutual_information, info, EXACT);
    close(rep.chi, 1.0, EXACT);
    close(rep.models[1].chi, 1.0, EXACT);
    close(rep.tightened_chi, 1.0, EXACT);

    let diag = measurement_diagonal_model(&ch).unwrap();
    let rep = tightened_bound_with(&ch, &[("diagonal".into(), diag)]).unwrap();
    close(rep.tightened_chi, info, 1e-9);
    close(info, 0.531, 1e-3);
    assert!(rep.passed());
}

#[test]
fn torus_canonical_model_has_dimension_64() {
    let grid = torus_grid(8).unwrap();
    let table = torus_family().tabulate(&grid).unwrap();
    let model = canonical_model(&table).unwrap();
    assert_eq!(model.dim(), 64);
    let check = model_generates(&model, &table, &grid, EXACT).unwrap();
    assert!(check.passed);
    assert_eq!(check.grid_points * model.space().len(), 256);
}

#[test]
fn alpha_split_canonical_reproduces_polarization() {
    let grid = alpha_grid(8).unwrap();
    let alpha = alpha_family();
    let table = alpha.tabulate(&grid).unwrap();
    let d = alpha.domain().clone();
    let prep = ParamGrid::cartesian(d.subdomain(&[0]).unwrap(), &[vec![0.0, 1.0, 2.0, 3.0]]).unwrap();
    let meas = ParamGrid::cartesian(d.subdomain(&[1]).unwrap(), &[uniform_angles(8)]).unwrap();
    let model = split_canonical_model(&table, Split { prep: vec![0], meas: vec![1] }, &prep, &meas).unwrap();
    assert_eq!(model.dim(), 4);
    for k in grid.points() {
        let theta = k.coord(0) * FRAC_PI_4;
        let w = model.trace_rule(k).unwrap();
        let [p1, p0] = polarization_weights(theta, k.coord(1));
        close(w[0], p1, EXACT);
        close(w[1], p0, EXACT);
    }
}

#[test]
fn bell_and_singlet_amplitudes() {
    let x = Ket::basis(2, 0).unwrap();
    let y = Ket::basis(2, 1).unwrap();
    let psi = bell_state();
    close(x.tensor(&x).inner(&psi).unwrap().norm(), FRAC_1_SQRT_2, EXACT);
    close(x.tensor(&y).inner(&psi).unwrap().norm(), 0.0, EXACT);
    let s = singlet_state();
    let expected = [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0];
    for (i, e) in expected.iter().enumerate() {
        close((s.amplitude(i) - Complex64::new(*e, 0.0)).norm(), 0.0, EXACT);
    }
}

#[test]
fn side_povms_are_complete() {
    for theta in uniform_angles(9) {
        let lin = linear_povm(theta, side_space("A"));
        close(Povm::completeness_residual(lin.elements().iter().map(|e| e.matrix())), 0.0, EXACT);
        let ell = elliptical_povm(theta, 0.7 * theta, side_space("B"));
        close(Povm::completeness_residual(ell.elements().iter().map(|e| e.matrix())), 0.0, EXACT);
    }
}

#[test]
fn marked_setting_violates_maximally() {
    close(s_bell(&BellSetting::maximal()), 2.0 * SQRT_2, 1e-12);
    let m = s_bell_maximize(16, BellSearch::Free).unwrap();
    assert!(m.value >= 2.8284, "{}", m.value);
    let e = m.setting.correlations();
    // S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
    let signs = [1.0, -1.0, 1.0, 1.0];
    for (v, s) in e.iter().zip(signs) {
        close(v * s, SQRT_2 / 2.0, 1e-6);
    }
}

#[test]
fn marked_points_on_the_torus() {
    let expected = [
        (-3.0 * FRAC_PI_8, -FRAC_PI_8),
        (FRAC_PI_8, -FRAC_PI_8),
        (FRAC_PI_8, 3.0 * FRAC_PI_8),
        (-3.0 * FRAC_PI_8, 3.0 * FRAC_PI_8),
    ];
    for (p, (a, b)) in marked_points().iter().zip(expected) {
        close(p.theta_a, a.rem_euclid(TAU), EXACT);
        close(p.theta_b, b.rem_euclid(TAU), EXACT);
    }
}

#[test]
fn coincident_sphere_points_anticorrelate() {
    let a = SpherePoint::new(1.1, 2.3).unwrap();
    let w = sphere_ppm(&SpherePairPoint::new(a, a)).weights().to_vec();
    for (x, e) in w.iter().zip([0.0, 0.5, 0.5, 0.0]) {
        close(*x, e, EXACT);
    }
}

#[test]
fn orbit_recovers_known_rotation() {
    let mut r = rng(41);
    for _ in 0..20 {
        let p = random_pair(&mut r);
        let r0 = random_rotation(&mut r);
        let q = r0.apply_pair(&p).unwrap();
        match orbit_rotation(&p, &q, ORBIT_MAP).unwrap() {
            OrbitResult::Unique { rotation, .. } => {
                let diff = (rotation.matrix() - r0.matrix()).abs().max();
                assert!(diff <= ORBIT_MAP, "rotation differs by {diff:e}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

#[test]
fn coincident_pairs_are_degenerate() {
    let p = SpherePoint::new(0.4, 1.0).unwrap();
    let pair = SpherePairPoint::new(p, p);
    let rot = Rotation3::about_axis(&Vector3::new(1.0, 0.0, 0.0), 0.8).unwrap();
    let q = rot.apply_pair(&pair).unwrap();
    match orbit_rotation(&pair, &q, ORBIT_MAP).unwrap() {
        OrbitResult::Degenerate { isotropy, level_set, residual, .. } => {
            assert_eq!(isotropy, "SO(2)");
            assert_eq!(level_set, "S^2");
            assert!(residual <= ORBIT_MAP);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn detuned_lasers_are_distinguishable() {
    let bank = LaserBank::detuned(1.5e-6, 1e-9, 1e-5).unwrap();
    let eve = eve_basis_for(&bank, DEFAULT_GRID_POINTS, PulseConvention::default()).unwrap();
    let rep = mismatch_attack(&bank, &eve, DEFAULT_THRESHOLD).unwrap();
    assert!(rep.distinguishable);
    assert!(rep.max_offdiagonal_spectral < 1e-3);
    close(bank.lasers()[0].center_omega, 1.2566e15, 1e-3 * 1.2566e15);
}

#[test]
fn nearly_identical_lasers_are_not() {
    let sigma = PulseConvention::default().sigma_omega(1e-9);
    let w0 = angular_frequency(1.5e-6);
    let bank = LaserBank::detuned(1.5e-6, 1e-9, 0.1 * sigma / w0).unwrap();
    let eve = eve_basis_for(&bank, DEFAULT_GRID_POINTS, PulseConvention::default()).unwrap();
    let rep = mismatch_attack(&bank, &eve, DEFAULT_THRESHOLD).unwrap();
    assert!(!rep.distinguishable);
    for i in 0..4 {
        for k in 0..4 {
            // Centres at most 0.3 sigma apart.
            assert!(rep.spectral_overlaps[i][k] > (-0.09_f64 / 4.0).exp() - 1e-6);
        }
    }
}

#[test]
fn identical_lasers_reproduce_alpha_gram() {
    let bank = LaserBank::detuned(1.5e-6, 1e-9, 0.0).unwrap();
    let eve = eve_basis_for(&bank, DEFAULT_GRID_POINTS, PulseConvention::default()).unwrap();
    let rep = mismatch_attack(&bank, &eve, DEFAULT_THRESHOLD).unwrap();
    assert!(!rep.distinguishable);
    for i in 0..4 {
        close(rep.gram[i][(i + 1) % 4], 0.5, 1e-6);
        close(rep.gram[i][(i + 2) % 4], 0.0, 1e-6);
    }
}
