//! Polarization-only (alpha) and polarization-plus-spectrum (beta) models.
//!
//! Alpha gives `P(1) = cos^2(theta - theta')`, which is `|<theta|theta'>|^2`
//! for linear polarization states. Beta multiplies this by the spectral
//! overlap `|<f, f_j>|^2` and puts the remainder on a no-detection outcome.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::spectrum::{spectral_overlap, SpectralBasis, SpectralProfile};
use crate::error::{Error, Result};
use crate::measure::{
    angle_distance, normalize_angle, Family, OutcomeSpace, ParamComponent, ParamDomain, ParamGrid, ParamPoint, Ppm,
    ProbabilityMeasure,
};
use crate::quantum::{qubit_linear_state, DensityOperator, Povm, QuantumModel, Split};
use crate::report::{CheckReport, CheckRow};
use crate::tol;

/// Label of the no-detection outcome of the beta model.
pub const NO_DETECTION: &str = "∅";

/// The four preparation angles, in index order.
pub const PREP_ANGLES: [f64; 4] = [0.0, FRAC_PI_4, 2.0 * FRAC_PI_4, 3.0 * FRAC_PI_4];
pub const PREP_LABELS: [&str; 4] = ["0", "pi/4", "pi/2", "3pi/4"];

pub fn alpha_space() -> OutcomeSpace {
    OutcomeSpace::new(["1", "0"]).expect("distinct labels")
}

pub fn beta_space() -> OutcomeSpace {
    OutcomeSpace::new(["1", "0", NO_DETECTION]).expect("distinct labels")
}

/// One of the four preparation angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaPrep(usize);

impl AlphaPrep {
    pub fn new(index: usize) -> Result<Self> {
        if index >= 4 {
            return Err(Error::domain(format!("preparation index {index} outside 0..4")));
        }
        Ok(AlphaPrep(index))
    }

    /// The preparation whose angle equals `theta` modulo `2pi`.
    pub fn from_angle(theta: f64) -> Result<Self> {
        PREP_ANGLES
            .iter()
            .position(|&a| angle_distance(a, theta) <= tol::ANGLE)
            .map(AlphaPrep)
            .ok_or_else(|| Error::domain(format!("angle {theta} is not one of 0, pi/4, pi/2, 3pi/4")))
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn theta(self) -> f64 {
        PREP_ANGLES[self.0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaMeas {
    pub theta_prime: f64,
}

/// `(cos^2(theta - theta'), sin^2(theta - theta'))` on outcomes `("1", "0")`,
/// for any pair of angles.
pub fn polarization_weights(theta: f64, theta_prime: f64) -> [f64; 2] {
    let c = (theta - theta_prime).cos();
    let p1 = c * c;
    [p1, 1.0 - p1]
}

pub fn alpha_ppm(theta: AlphaPrep, meas: AlphaMeas) -> ProbabilityMeasure {
    ProbabilityMeasure::new(alpha_space(), polarization_weights(theta.theta(), meas.theta_prime).to_vec())
        .expect("weights sum to one")
}

/// Domain `{0, pi/4, pi/2, 3pi/4} x S^1`; the first coordinate is the
/// preparation index.
pub fn alpha_domain() -> ParamDomain {
    ParamDomain::new(vec![
        ParamComponent::finite_set("theta", PREP_LABELS),
        ParamComponent::circle("theta_prime"),
    ])
    .expect("valid domain")
}

pub fn alpha_family() -> Ppm {
    Ppm::closed_form("bb84 alpha", alpha_domain(), alpha_space(), |k| {
        Ok(polarization_weights(PREP_ANGLES[k.coord(0) as usize], k.coord(1)).to_vec())
    })
}

/// Grid of the four preparations against `n_meas` uniform analyzer angles.
pub fn alpha_grid(n_meas: usize) -> Result<ParamGrid> {
    ParamGrid::cartesian(
        alpha_domain(),
        &[(0..4).map(|i| i as f64).collect(), crate::measure::uniform_angles(n_meas)],
    )
}

/// Qubit model: `rho = |theta><theta|` with linear states, and the
/// projective POVM `{|theta'><theta'|, I - |theta'><theta'|}`.
pub fn alpha_model() -> Result<QuantumModel> {
    let domain = alpha_domain();
    let split = Split {
        prep: vec![0],
        meas: vec![1],
    };
    let rho_fn = Family::closed_form("linear polarization states", domain.subdomain(&[0])?, |k| {
        Ok(DensityOperator::pure(&qubit_linear_state(PREP_ANGLES[k.coord(0) as usize])))
    });
    let povm_fn = Family::closed_form("linear analyzer", domain.subdomain(&[1])?, |k| {
        Povm::binary_projective(alpha_space(), &qubit_linear_state(k.coord(0)))
    });
    QuantumModel::with_split(2, domain, split, alpha_space(), rho_fn, povm_fn)
}

/// Preparation point of the alpha domain for index `i`.
pub fn alpha_prep_point(i: usize) -> ParamPoint {
    ParamPoint::raw(vec![i as f64])
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaPrep {
    pub theta: f64,
    pub profile: SpectralProfile,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaMeas {
    pub theta_prime: f64,
    /// 0-based spectral mode of the basis.
    pub mode: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaWeights {
    pub w1: f64,
    pub w0: f64,
    /// `|<f, f_j>|^2`.
    pub spectral: f64,
    /// Completed measure on `("1", "0", NO_DETECTION)`.
    pub measure: ProbabilityMeasure,
}

pub fn beta_ppm(prep: &BetaPrep, meas: BetaMeas, basis: &SpectralBasis) -> Result<BetaWeights> {
    let mode = basis.mode(meas.mode)?;
    let s = spectral_overlap(&prep.profile, mode)?.norm_sqr().min(1.0);
    let [p1, p0] = polarization_weights(prep.theta, meas.theta_prime);
    let (w1, w0) = (p1 * s, p0 * s);
    let measure = ProbabilityMeasure::new(beta_space(), vec![w1, w0, (1.0 - w1 - w0).max(0.0)])?;
    Ok(BetaWeights {
        w1,
        w0,
        spectral: s,
        measure,
    })
}

/// Beta as a PPM on `S^1 x {spectra} x S^1 x {modes}`, where the spectra are
/// the given preparation profiles and the modes those of `basis`.
pub fn beta_family(profiles: Vec<(String, SpectralProfile)>, basis: SpectralBasis) -> Result<Ppm> {
    if profiles.is_empty() {
        return Err(Error::domain("beta family needs at least one preparation spectrum"));
    }
    let domain = ParamDomain::new(vec![
        ParamComponent::circle("theta"),
        ParamComponent::finite_set("spectrum", profiles.iter().map(|(n, _)| n.clone())),
        ParamComponent::circle("theta_prime"),
        ParamComponent::finite_set("mode", (0..basis.len()).map(|j| j.to_string())),
    ])?;
    let profiles: Vec<SpectralProfile> = profiles.into_iter().map(|(_, p)| p).collect();
    Ok(Ppm::closed_form("bb84 beta", domain, beta_space(), move |k| {
        let prep = BetaPrep {
            theta: k.coord(0),
            profile: profiles[k.coord(1) as usize].clone(),
        };
        let meas = BetaMeas {
            theta_prime: k.coord(2),
            mode: k.coord(3) as usize,
        };
        Ok(beta_ppm(&prep, meas, &basis)?.measure.weights().to_vec())
    }))
}

/// Envelopment check through `Xi(theta) = (theta, f_1)` and mode 0: for every
/// `theta, theta'` on the one-circle `theta_grid`, the beta weights on
/// `{1, 0}` must equal the polarization weights within `tol`.
pub fn envelopment_witness(basis: &SpectralBasis, theta_grid: &ParamGrid, tol: f64) -> Result<CheckReport> {
    envelopment_witness_with(basis, 0, 0, theta_grid, tol)
}

/// As [`envelopment_witness`], with Alice's spectrum taken as mode
/// `prep_mode` and Bob's detector on mode `meas_mode`.
pub fn envelopment_witness_with(
    basis: &SpectralBasis,
    prep_mode: usize,
    meas_mode: usize,
    theta_grid: &ParamGrid,
    tol: f64,
) -> Result<CheckReport> {
    let comps = theta_grid.domain().components();
    if comps.len() != 1 || !matches!(comps[0], ParamComponent::Circle { .. }) {
        return Err(Error::domain("envelopment grid must be a grid on one circle"));
    }
    let profile = basis.mode(prep_mode)?.clone();
    let mut rows = Vec::with_capacity(theta_grid.len() * theta_grid.len());
    for a in theta_grid.points() {
        let prep = BetaPrep {
            theta: a.coord(0),
            profile: profile.clone(),
        };
        for b in theta_grid.points() {
            let meas = BetaMeas {
                theta_prime: b.coord(0),
                mode: meas_mode,
            };
            let beta = beta_ppm(&prep, meas, basis)?;
            let [p1, p0] = polarization_weights(a.coord(0), b.coord(0));
            rows.push(CheckRow {
                point: ParamPoint::raw(vec![normalize_angle(a.coord(0)), normalize_angle(b.coord(0))]),
                violation: (beta.w1 - p1).abs().max((beta.w0 - p0).abs()),
            });
        }
    }
    Ok(CheckReport::from_rows("envelopment_witness", tol, rows))
}
