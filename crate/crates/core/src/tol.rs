//! Numerical tolerances shared across modules.

/// Probability weights must sum to one within this bound.
pub const MEASURE_SUM: f64 = 1e-12;

/// Ket norms, density-operator hermiticity and trace.
pub const STATE: f64 = 1e-12;

/// Hermiticity of detection operators.
pub const HERMITIAN: f64 = 1e-12;

/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as zero; anything lower is
/// rejected as genuinely non-positive.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Entrywise deviation of `sum_j M(j)` from the identity.
pub const POVM_COMPLETENESS: f64 = 1e-10;

/// Admissible imaginary part of a trace that should be real.
pub const IMAG_TRACE: f64 = 1e-10;

/// Sum of trace-rule weights generated from a model.
pub const BORN_SUM: f64 = 1e-10;

/// Modular comparison of stored angles.
pub const ANGLE: f64 = 1e-9;

/// Pairwise inner products of a spectral basis.
pub const SPECTRAL_ORTHONORMAL: f64 = 1e-8;

/// Quadrature norm of a spectral profile.
pub const SPECTRAL_NORM: f64 = 1e-9;

/// Orthogonality and determinant of 3x3 rotations.
pub const ROTATION: f64 = 1e-10;

/// Pair angles closer than this to 0 or pi are treated as degenerate.
pub const ZETA_DEGENERATE: f64 = 1e-7;

/// Slack in the chain `I <= tightened chi <= chi`.
pub const INFO_CHAIN: f64 = 1e-9;

/// Agreement a user-supplied model must reach with the conditional PPM
/// before it joins the tightened-bound family.
pub const MODEL_MATCH: f64 = 1e-10;
