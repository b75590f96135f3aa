use std::path::Path;

use anyhow::{Context, Result};
use tracerule::bb84::{alpha_space, PREP_ANGLES, PREP_LABELS};
use tracerule::info::{measurement_diagonal_model, tightened_bound_with, ChannelJson, ChannelModel};
use tracerule::measure::OutcomeSpace;
use tracerule::quantum::{qubit_linear_state, DensityOperator, Povm};

use super::Ctx;
use crate::args::HolevoArgs;
use crate::output::{Check, GridMeta, Report};
use crate::sources::load_json;

/// Uniform ensemble of the four BB84 polarization states, measured by the
/// projective analyzer at `theta_prime`.
fn bb84_channel(theta_prime: f64) -> tracerule::Result<ChannelModel> {
    let states = PREP_ANGLES
        .iter()
        .map(|&t| DensityOperator::pure(&qubit_linear_state(t)))
        .collect();
    let povm = Povm::binary_projective(alpha_space(), &qubit_linear_state(theta_prime))?;
    ChannelModel::with_labels(OutcomeSpace::new(PREP_LABELS)?, vec![0.25; 4], states, povm)
}

pub fn holevo(a: HolevoArgs, ctx: &Ctx) -> Result<Report> {
    let ch = if a.channel == "bb84" {
        bb84_channel(a.theta_prime)?
    } else {
        let j: ChannelJson = load_json(Path::new(&a.channel))?;
        ChannelModel::try_from(j).with_context(|| format!("invalid channel {}", a.channel))?
    };
    let extra = if a.diagonal {
        vec![("measurement diagonal".to_string(), measurement_diagonal_model(&ch)?)]
    } else {
        Vec::new()
    };
    let r = tightened_bound_with(&ch, &extra)?;
    let grid = GridMeta::new("preparation labels", ch.len());
    let mut report = ctx.report();
    let slack = r.chain.slack;
    report.check(Check::new(
        "mutual information <= chi",
        (r.mutual_information - r.chi).max(0.0),
        slack,
        grid.clone(),
    ));
    report.check(Check::new(
        "mutual information <= tightened chi",
        (r.mutual_information - r.tightened_chi).max(0.0),
        slack,
        grid.clone(),
    ));
    report.check(Check::new(
        "tightened chi <= chi",
        (r.tightened_chi - r.chi).max(0.0),
        slack,
        grid,
    ));
    report.results(&r)?;
    Ok(report)
}
