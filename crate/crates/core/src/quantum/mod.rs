//! Finite-dimensional density operators, POVMs, the trace rule, quantum
//! models over parameter domains, and the canonical model builders.
//!
//! Hilbert spaces are finite-dimensional; the dimension is a constructor
//! argument. Square roots and logarithms go through the Hermitian
//! eigendecomposition, with eigenvalues in `[-1e-10, 0)` clamped to zero.

mod canonical;
mod file;
pub mod linalg;
mod model;
mod operators;

pub use canonical::{canonical_model, mixed_canonical_model, split_canonical_model, ROUND_TRIP_TOL};
pub use file::{EntryResiduals, InvariantResidual, ModelEntry, ModelFile, ModelValidation};
pub use model::{
    born_probability, generate_ppm, log2_on_support, model_generates, model_ppm, overlap, qubit_linear_state,
    von_neumann_entropy, DensityOperatorFunction, PovmFunction, QuantumModel, Split,
};
pub use operators::{DensityOperator, DetectionOperator, Ket, OperatorJson, Povm};
