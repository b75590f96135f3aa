//! BB84 at two levels of detail and the laser frequency-mismatch study.
//!
//! Outcome `"1"` is a detection in the analyzer's pass channel, `"0"` in the
//! orthogonal channel. Frequencies are angular (rad/s). Quadrature is the
//! uniform trapezoid rule on a fixed grid.

mod attack;
mod models;
mod spectrum;

pub use attack::{
    angular_frequency, eve_basis_for, mismatch_attack, mismatch_attack_with, AttackReport, Laser, LaserBank,
    DEFAULT_GRID_POINTS, DEFAULT_THRESHOLD, EVE_RULE, GRID_MARGIN_SIGMAS, SPEED_OF_LIGHT,
};
pub use models::{
    alpha_domain, alpha_family, alpha_grid, alpha_model, alpha_ppm, alpha_prep_point, alpha_space, beta_family,
    beta_ppm, beta_space, envelopment_witness, envelopment_witness_with, polarization_weights, AlphaMeas, AlphaPrep,
    BetaMeas, BetaPrep, BetaWeights, NO_DETECTION, PREP_ANGLES, PREP_LABELS,
};
pub use spectrum::{
    gaussian_spectrum, gaussian_spectrum_with, spectral_overlap, FrequencyGrid, PulseConvention, PulseShape,
    SpectralBasis, SpectralProfile, DEPENDENT_SEED, SPAN_SIGMAS,
};
