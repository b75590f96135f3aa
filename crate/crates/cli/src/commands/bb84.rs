use anyhow::Result;
use serde::Serialize;
use tracerule::bb84::{
    alpha_family, alpha_grid, alpha_space, angular_frequency, beta_family, beta_space, envelopment_witness_with,
    eve_basis_for, mismatch_attack_with, FrequencyGrid, LaserBank, PulseConvention, SpectralBasis,
    GRID_MARGIN_SIGMAS, PREP_ANGLES,
};
use tracerule::measure::{envelops, uniform_angles, OutcomeSurjection, ParamComponent, ParamDomain, ParamGrid, ParamInjection};

use super::{require_positive, require_res, require_tol, Ctx};
use crate::args::{Bb84AttackArgs, Bb84EnvelopArgs};
use crate::output::{Check, GridMeta, Report};
use crate::sources::load_json;

pub fn bb84_attack(a: Bb84AttackArgs, ctx: &Ctx) -> Result<Report> {
    require_res("grid-points", a.grid_points)?;
    require_tol("threshold", a.threshold)?;
    require_positive("sigma-factor", a.sigma_factor)?;
    let bank = match &a.bank {
        Some(p) => load_json::<LaserBank>(p)?,
        None => {
            require_positive("wavelength-m", a.wavelength_m)?;
            require_positive("pulse-s", a.pulse_s)?;
            LaserBank::detuned(a.wavelength_m, a.pulse_s, a.detune_frac)?
        }
    };
    let conv = PulseConvention { factor: a.sigma_factor };
    let basis = eve_basis_for(&bank, a.grid_points, conv)?;
    let r = mismatch_attack_with(&bank, &basis, a.threshold, conv)?;
    #[derive(Serialize)]
    struct Out<'a> {
        distinguishable: bool,
        residual: f64,
        grid: GridMeta,
        #[serde(flatten)]
        attack: &'a tracerule::bb84::AttackReport,
    }
    let mut report = ctx.report();
    report.results(&Out {
        distinguishable: r.distinguishable,
        residual: r.max_offdiagonal_spectral,
        grid: GridMeta::new("uniform frequency grid, trapezoid weights", r.grid_points),
        attack: &r,
    })?;
    Ok(report)
}

pub fn bb84_envelop(a: Bb84EnvelopArgs, ctx: &Ctx) -> Result<Report> {
    require_res("angles", a.angles)?;
    require_res("grid-points", a.grid_points)?;
    require_tol("tol", a.tol)?;
    require_positive("wavelength-m", a.wavelength_m)?;
    require_positive("pulse-s", a.pulse_s)?;
    if a.modes == 0 {
        anyhow::bail!("--modes must be positive");
    }
    let w0 = angular_frequency(a.wavelength_m);
    let sigma = PulseConvention::default().sigma_omega(a.pulse_s);
    // Higher Hermite-Gauss modes spread roughly as sqrt(2n + 1).
    let span = (GRID_MARGIN_SIGMAS + 2.0 * (2.0 * a.modes as f64 + 1.0).sqrt()) * sigma;
    let fgrid = FrequencyGrid::new(w0 - span, w0 + span, a.grid_points)?;
    let basis = SpectralBasis::hermite_gauss(&fgrid, w0, sigma, a.modes)?;

    let circle = ParamDomain::new(vec![ParamComponent::circle("theta")])?;
    let theta_grid = ParamGrid::cartesian(circle, &[uniform_angles(a.angles)])?;
    let witness = envelopment_witness_with(&basis, a.prep_mode, a.meas_mode, &theta_grid, a.tol)?;

    let alpha = alpha_family();
    let prep_profile = basis.mode(a.prep_mode)?.clone();
    let beta = beta_family(vec![("f_prep".into(), prep_profile)], basis)?;
    let meas_mode = a.meas_mode as f64;
    let beta_domain = beta.domain().clone();
    let target = beta_domain.clone();
    let big_xi = ParamInjection::new(alpha.domain().clone(), beta_domain, move |k| {
        target.point(vec![PREP_ANGLES[k.coord(0) as usize], 0.0, k.coord(1), meas_mode])
    });
    let xi = OutcomeSurjection::from_labels(beta_space(), alpha_space(), &["1", "0", "0"])?;
    let agrid = alpha_grid(a.angles)?;
    let generic = envelops(&beta, &big_xi, &xi, &alpha, &agrid, a.tol)?;
    ctx.write_csv(|w| witness.write_csv(w))?;

    let mut report = ctx.report();
    report.check(Check::from_report(
        &witness,
        &format!("{0}x{0} uniform polarization and analyzer angles", a.angles),
    ));
    report.check(Check::from_report(
        &generic,
        &format!("4 preparations x {} analyzer angles", a.angles),
    ));
    report.results(&serde_json::json!({
        "modes": a.modes,
        "prep_mode": a.prep_mode,
        "meas_mode": a.meas_mode,
        "center_omega": w0,
        "sigma_omega": sigma,
        "frequency_grid": { "start": fgrid.start(), "stop": fgrid.stop(), "points": fgrid.len() },
        "outcome_map": { "1": "1", "0": "0", "∅": "0" },
    }))?;
    Ok(report)
}
