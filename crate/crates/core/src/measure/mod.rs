//! Finite-outcome probability measures, parameter spaces, parametrized
//! probability measures (PPMs), and the relations and metrics between them.
//!
//! Outcome spaces are finite, so every subset is an event and the L1
//! supremum over partitions reduces to half the sum of absolute weight
//! differences. Statements quantified over a continuous parameter space are
//! evaluated on an explicit [`ParamGrid`], and the grid size travels with
//! every verdict.

mod bipartite;
mod outcome;
mod param;
mod ppm;
mod relations;

pub use bipartite::{
    epsilon_separable, local_reach_check, marginal, marginal_invariance_check, no_signaling_check, separation,
    BipartiteLayout, LocalReachReport, MarginalInvarianceReport, ReachWitness, SeparabilityView, Side,
};
pub use outcome::{Event, OutcomeSpace, OutcomeSurjection, ProbabilityMeasure};
pub use param::{
    angle_distance, normalize_angle, sphere_unit, uniform_angles, Family, ParamComponent, ParamDomain, ParamGrid,
    ParamInjection, ParamPoint,
};
pub use ppm::{Ppm, PpmTable};
pub use relations::{
    envelops, event_probability, l1_distance, level_set_equal, ppm_distance, refinement_residual, refines,
    PpmDistance,
};
