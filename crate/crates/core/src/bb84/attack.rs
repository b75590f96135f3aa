//! Four-laser transmitters and the spectral side channel they open to an
//! intercept-resend eavesdropper.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::models::{polarization_weights, PREP_ANGLES};
use super::spectrum::{
    gaussian_spectrum_with, spectral_overlap, FrequencyGrid, PulseConvention, PulseShape, SpectralBasis,
    SpectralProfile,
};
use crate::error::{Error, Result};
use crate::measure::angle_distance;
use crate::tol;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default frequency grid resolution.
pub const DEFAULT_GRID_POINTS: usize = 2048;

/// Grid margin beyond the outermost laser centres, in spectral standard
/// deviations.
pub const GRID_MARGIN_SIGMAS: f64 = 8.0;

/// Default threshold on off-diagonal `|<f_i, f_k>|^2`.
pub const DEFAULT_THRESHOLD: f64 = 1e-3;

/// Angular frequency `2 pi c / lambda`.
pub fn angular_frequency(wavelength_m: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength_m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Laser {
    pub theta: f64,
    pub center_omega: f64,
    pub duration: f64,
}

/// One laser per preparation angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Laser>", into = "Vec<Laser>")]
pub struct LaserBank {
    lasers: Vec<Laser>,
}

impl TryFrom<Vec<Laser>> for LaserBank {
    type Error = Error;

    fn try_from(lasers: Vec<Laser>) -> Result<Self> {
        LaserBank::new(lasers)
    }
}

impl From<LaserBank> for Vec<Laser> {
    fn from(b: LaserBank) -> Self {
        b.lasers
    }
}

impl LaserBank {
    /// The four angles must be `0, pi/4, pi/2, 3pi/4` in some order.
    pub fn new(lasers: Vec<Laser>) -> Result<Self> {
        if lasers.len() != 4 {
            return Err(Error::domain(format!("a laser bank has four lasers, got {}", lasers.len())));
        }
        let mut seen = [false; 4];
        for l in &lasers {
            let i = PREP_ANGLES
                .iter()
                .position(|&a| angle_distance(a, l.theta) <= tol::ANGLE)
                .ok_or_else(|| Error::domain(format!("laser angle {} is not a preparation angle", l.theta)))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::domain(format!("two lasers share the angle {}", PREP_ANGLES[i])));
            }
            if !(l.duration > 0.0) || !(l.center_omega > 0.0) {
                return Err(Error::domain("laser duration and centre frequency must be positive"));
            }
        }
        Ok(LaserBank { lasers })
    }

    /// Laser `i` (angle `PREP_ANGLES[i]`) centred at `w0 (1 + i frac)`.
    pub fn detuned(wavelength_m: f64, duration: f64, frac: f64) -> Result<Self> {
        let w0 = angular_frequency(wavelength_m);
        LaserBank::new(
            PREP_ANGLES
                .iter()
                .enumerate()
                .map(|(i, &theta)| Laser {
                    theta,
                    center_omega: w0 * (1.0 + i as f64 * frac),
                    duration,
                })
                .collect(),
        )
    }

    pub fn lasers(&self) -> &[Laser] {
        &self.lasers
    }

    /// `points` frequencies over `[min centre - 8 sigma, max centre + 8 sigma]`,
    /// `sigma` the widest laser's spectral deviation.
    pub fn frequency_grid(&self, points: usize, convention: PulseConvention) -> Result<FrequencyGrid> {
        let sigma = self
            .lasers
            .iter()
            .map(|l| convention.sigma_omega(l.duration))
            .fold(0.0, f64::max);
        let lo = self.lasers.iter().map(|l| l.center_omega).fold(f64::INFINITY, f64::min);
        let hi = self.lasers.iter().map(|l| l.center_omega).fold(f64::NEG_INFINITY, f64::max);
        FrequencyGrid::new(lo - GRID_MARGIN_SIGMAS * sigma, hi + GRID_MARGIN_SIGMAS * sigma, points)
    }

    pub fn spectra(&self, grid: &FrequencyGrid, convention: PulseConvention) -> Result<Vec<(SpectralProfile, PulseShape)>> {
        self.lasers
            .iter()
            .map(|l| gaussian_spectrum_with(l.center_omega, l.duration, grid, convention))
            .collect()
    }
}

/// Eve's identification rule, recorded in every report.
pub const EVE_RULE: &str = "measure the spectral mode in Eve's basis; guess the laser whose spectrum has the \
largest |<e_m, f_k>|^2 (lowest index on ties); measure polarization in that laser's basis and resend";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub lasers: Vec<Laser>,
    pub pulses: Vec<PulseShape>,
    pub grid_points: usize,
    pub grid_start: f64,
    pub grid_step: f64,
    /// `|<f_i, f_k>|^2`.
    pub spectral_overlaps: Vec<Vec<f64>>,
    /// `cos^2(theta_i - theta_k) |<f_i, f_k>|^2`.
    pub gram: Vec<Vec<f64>>,
    pub max_offdiagonal_spectral: f64,
    pub eve_rule: String,
    pub eve_modes: usize,
    /// Laser Eve guesses for each of her modes.
    pub eve_guess: Vec<usize>,
    /// Probability Eve names laser `i` correctly when it fired.
    pub identification: Vec<f64>,
    /// Uniform average of [`identification`](Self::identification).
    pub identification_probability: f64,
    /// Error rate on Bob's sifted bits (same basis as Alice).
    pub sifted_error_rate: f64,
    pub threshold: f64,
    pub distinguishable: bool,
}

/// Spectral attack on `bank` with Eve measuring in `eve_basis`; lasers are
/// generated on the basis grid.
pub fn mismatch_attack(bank: &LaserBank, eve_basis: &SpectralBasis, threshold: f64) -> Result<AttackReport> {
    mismatch_attack_with(bank, eve_basis, threshold, PulseConvention::default())
}

pub fn mismatch_attack_with(
    bank: &LaserBank,
    eve_basis: &SpectralBasis,
    threshold: f64,
    convention: PulseConvention,
) -> Result<AttackReport> {
    let grid = eve_basis.grid();
    let spectra = bank.spectra(grid, convention)?;
    let n = spectra.len();
    let mut spectral = vec![vec![0.0; n]; n];
    let mut gram = vec![vec![0.0; n]; n];
    let mut max_off = 0.0_f64;
    for i in 0..n {
        for k in 0..n {
            let s = if i == k {
                1.0
            } else {
                spectral_overlap(&spectra[i].0, &spectra[k].0)?.norm_sqr()
            };
            spectral[i][k] = s;
            gram[i][k] = polarization_weights(bank.lasers[i].theta, bank.lasers[k].theta)[0] * s;
            if i != k {
                max_off = max_off.max(s);
            }
        }
    }

    // P(m | i) for each of Eve's modes and each laser.
    let mode_probs: Vec<Vec<f64>> = eve_basis
        .profiles()
        .iter()
        .map(|e| spectra.iter().map(|(f, _)| Ok(spectral_overlap(e, f)?.norm_sqr())).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let guess: Vec<usize> = mode_probs
        .iter()
        .map(|row| {
            let best = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            row.iter().position(|&p| p >= best - 1e-12 * best.abs()).unwrap_or(0)
        })
        .collect();
    let mut identification = vec![0.0; n];
    let mut error = 0.0;
    for i in 0..n {
        for (m, row) in mode_probs.iter().enumerate() {
            let k = guess[m];
            if k == i {
                identification[i] += row[i];
            }
            // Same analyzer basis: the resent state is Alice's; otherwise Bob
            // sees a coin flip.
            let d = angle_distance(bank.lasers[i].theta, bank.lasers[k].theta) % (PI / 2.0);
            let same_basis = d.min(PI / 2.0 - d) <= tol::ANGLE;
            if !same_basis {
                error += 0.5 * row[i] / n as f64;
            }
        }
    }
    Ok(AttackReport {
        lasers: bank.lasers.clone(),
        pulses: spectra.iter().map(|(_, p)| p.clone()).collect(),
        grid_points: grid.len(),
        grid_start: grid.start(),
        grid_step: grid.step(),
        spectral_overlaps: spectral,
        gram,
        max_offdiagonal_spectral: max_off,
        eve_rule: EVE_RULE.into(),
        eve_modes: eve_basis.len(),
        eve_guess: guess,
        identification_probability: identification.iter().sum::<f64>() / n as f64,
        identification,
        sifted_error_rate: error,
        threshold,
        distinguishable: max_off < threshold,
    })
}

/// Eve's default basis: Gram-Schmidt of the bank's own spectra on a grid of
/// `points` frequencies.
pub fn eve_basis_for(bank: &LaserBank, points: usize, convention: PulseConvention) -> Result<SpectralBasis> {
    let grid = bank.frequency_grid(points, convention)?;
    let seeds: Vec<SpectralProfile> = bank.spectra(&grid, convention)?.into_iter().map(|(f, _)| f).collect();
    SpectralBasis::gram_schmidt(&seeds)
}
