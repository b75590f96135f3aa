use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Inputs do not belong to the domain an operation is defined on
    /// (mismatched spaces, out-of-range indices, unknown grid points).
    #[error("domain error: {0}")]
    Domain(String),

    /// A value failed one of its structural invariants by more than the
    /// permitted tolerance.
    #[error("invalid {what}: residual {residual:e} exceeds tolerance {tol:e}")]
    Invariant {
        what: String,
        residual: f64,
        tol: f64,
    },

    /// A computed quantity left its admissible range, e.g. a trace-rule
    /// probability with a non-negligible imaginary part.
    #[error("numerical error: {what} (residual {residual:e})")]
    Numerical { what: String, residual: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(what: impl Into<String>, residual: f64, tol: f64) -> Self {
        Error::Invariant {
            what: what.into(),
            residual,
            tol,
        }
    }

    pub(crate) fn numerical(what: impl Into<String>, residual: f64) -> Self {
        Error::Numerical {
            what: what.into(),
            residual,
        }
    }

    /// Numeric residual carried by invariant and numerical failures.
    pub fn residual(&self) -> Option<f64> {
        match self {
            Error::Invariant { residual, .. } | Error::Numerical { residual, .. } => Some(*residual),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
