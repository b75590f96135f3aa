//! Parametrized probability measures and the quantum models that generate
//! them through the trace rule `mu(w) = Tr[rho M(w)]`.
//!
//! - [`measure`]: outcome spaces, parameter domains, PPMs, refinement,
//!   envelopment, L1 and PPM distances, bipartite checks.
//! - [`quantum`]: density operators, POVMs, quantum models, and canonical
//!   model builders that reproduce any tabulated PPM.
//! - [`info`]: Shannon and von Neumann entropies, mutual information, and
//!   Holevo bounds over families of models of one PPM.
//! - [`bb84`]: polarization-only and polarization-plus-spectrum models of
//!   BB84 and the laser frequency-mismatch study.
//! - [`entangle`]: Bell-state and singlet PPMs on the torus and on pairs of
//!   sphere points, CHSH values, and rotation-orbit structure.

pub mod bb84;
pub mod entangle;
pub mod error;
pub mod info;
pub mod measure;
pub mod quantum;
pub mod report;
pub mod tol;

pub use error::{Error, Result};
