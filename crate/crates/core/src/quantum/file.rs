//! JSON encoding of quantum models as tabulated operator families, and
//! residual-level validation of such files.

use serde::{Deserialize, Serialize};

use super::linalg::{hermitian_eigenvalues, hermiticity_residual, trace};
use super::model::{QuantumModel, Split};
use super::operators::{DensityOperator, OperatorJson, Povm};
use crate::error::{Error, Result};
use crate::measure::{Family, OutcomeSpace, ParamDomain, ParamGrid, ParamPoint};
use crate::tol;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelEntry {
    pub point: ParamPoint,
    pub rho: OperatorJson,
    pub povm: Vec<OperatorJson>,
}

/// Model tabulated on a grid of its full domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub dim: usize,
    pub domain: ParamDomain,
    pub outcomes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_order: Option<Vec<ParamPoint>>,
    pub entries: Vec<ModelEntry>,
}

impl ModelFile {
    pub fn from_model(model: &QuantumModel, grid: &ParamGrid) -> Result<Self> {
        if grid.domain() != model.domain() {
            return Err(Error::domain("grid is not on the model's domain"));
        }
        let entries = grid
            .points()
            .iter()
            .map(|k| {
                Ok(ModelEntry {
                    point: k.clone(),
                    rho: OperatorJson::from(model.state(k)?.matrix()),
                    povm: model
                        .povm(k)?
                        .elements()
                        .iter()
                        .map(|e| OperatorJson::from(e.matrix()))
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelFile {
            dim: model.dim(),
            domain: model.domain().clone(),
            outcomes: model.space().labels().to_vec(),
            split: model.split().cloned(),
            basis_order: model.basis_order().map(<[_]>::to_vec),
            entries,
        })
    }

    /// Residual of every invariant at every entry, without failing early.
    pub fn validate(&self) -> Result<ModelValidation> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let rho = e.rho.to_matrix()?;
            if rho.nrows() != self.dim {
                return Err(Error::domain(format!("state at {} has dimension {}", e.point, rho.nrows())));
            }
            if e.povm.len() != self.outcomes.len() {
                return Err(Error::domain(format!(
                    "POVM at {} has {} elements for {} outcomes",
                    e.point,
                    e.povm.len(),
                    self.outcomes.len()
                )));
            }
            let mats = e.povm.iter().map(OperatorJson::to_matrix).collect::<Result<Vec<_>>>()?;
            if mats.iter().any(|m| m.nrows() != self.dim) {
                return Err(Error::domain(format!("POVM element at {} has the wrong dimension", e.point)));
            }
            let rho_eig = hermitian_eigenvalues(&rho);
            let mut povm_herm = 0.0_f64;
            let mut povm_low = 0.0_f64;
            let mut povm_high = 0.0_f64;
            for m in &mats {
                povm_herm = povm_herm.max(hermiticity_residual(m));
                let eig = hermitian_eigenvalues(m);
                povm_low = povm_low.max(-eig[0]);
                povm_high = povm_high.max(eig[eig.len() - 1] - 1.0);
            }
            entries.push(EntryResiduals {
                point: e.point.clone(),
                rho_hermiticity: hermiticity_residual(&rho),
                rho_trace: (trace(&rho) - num_complex::Complex64::new(1.0, 0.0)).norm(),
                rho_negativity: (-rho_eig[0]).max(0.0),
                povm_hermiticity: povm_herm,
                povm_negativity: povm_low.max(0.0),
                povm_excess: povm_high.max(0.0),
                povm_completeness: Povm::completeness_residual(mats.iter()),
            });
        }
        Ok(ModelValidation::summarize(entries))
    }

    pub fn into_model(self) -> Result<QuantumModel> {
        let space = OutcomeSpace::new(self.outcomes)?;
        let mut states = Vec::with_capacity(self.entries.len());
        let mut povms = Vec::with_capacity(self.entries.len());
        for e in self.entries {
            states.push((e.point.clone(), DensityOperator::new(e.rho.to_matrix()?)?));
            let mats = e.povm.iter().map(OperatorJson::to_matrix).collect::<Result<Vec<_>>>()?;
            povms.push((e.point, Povm::from_matrices(space.clone(), mats)?));
        }
        let model = QuantumModel::new(
            self.dim,
            space,
            Family::tabulated(self.domain.clone(), states)?,
            Family::tabulated(self.domain, povms)?,
        )?;
        Ok(match self.basis_order {
            Some(o) => model.with_basis_order(o),
            None => model,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryResiduals {
    pub point: ParamPoint,
    pub rho_hermiticity: f64,
    pub rho_trace: f64,
    pub rho_negativity: f64,
    pub povm_hermiticity: f64,
    pub povm_negativity: f64,
    pub povm_excess: f64,
    pub povm_completeness: f64,
}

/// One named invariant with its worst residual and tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantResidual {
    pub invariant: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelValidation {
    pub passed: bool,
    pub invariants: Vec<InvariantResidual>,
    pub entries: Vec<EntryResiduals>,
}

impl ModelValidation {
    fn summarize(entries: Vec<EntryResiduals>) -> Self {
        let worst = |f: fn(&EntryResiduals) -> f64| entries.iter().map(f).fold(0.0, f64::max);
        let invariants: Vec<InvariantResidual> = [
            ("density operator hermiticity", worst(|e| e.rho_hermiticity), tol::STATE),
            ("density operator trace", worst(|e| e.rho_trace), tol::STATE),
            ("density operator positivity", worst(|e| e.rho_negativity), tol::EIGEN_CLAMP),
            ("detection operator hermiticity", worst(|e| e.povm_hermiticity), tol::HERMITIAN),
            ("detection operator positivity", worst(|e| e.povm_negativity), tol::EIGEN_CLAMP),
            ("detection operator bound", worst(|e| e.povm_excess), tol::EIGEN_CLAMP),
            ("POVM completeness", worst(|e| e.povm_completeness), tol::POVM_COMPLETENESS),
        ]
        .into_iter()
        .map(|(name, residual, tolerance)| InvariantResidual {
            invariant: name.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        })
        .collect();
        ModelValidation {
            passed: invariants.iter().all(|i| i.passed),
            invariants,
            entries,
        }
    }

    /// The first failing invariant, if any.
    pub fn first_failure(&self) -> Option<&InvariantResidual> {
        self.invariants.iter().find(|i| !i.passed)
    }
}
