//! Classical-quantum channels: priors over preparations, one state per
//! preparation, and a fixed POVM. All entropies are in bits.
//!
//! The tightened bound minimizes Holevo chi over an explicit family of models
//! that all generate the channel's conditional PPM. The family always holds
//! the given model and the canonical orthogonal-state model; callers may add
//! more through [`tightened_bound_with`]. The true minimum over every model of
//! the PPM is not searched, so the result is an upper envelope of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Family, OutcomeSpace, ParamComponent, ParamDomain, ParamGrid, ParamPoint, Ppm, ProbabilityMeasure};
use crate::quantum::linalg::CMatrix;
use crate::quantum::{
    born_probability, canonical_model, model_generates, von_neumann_entropy, DensityOperator, DetectionOperator, Ket,
    OperatorJson, Povm, QuantumModel,
};
use crate::tol;

fn entropy_of(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| -w * w.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `-sum_j mu(j) log2 mu(j)` with `0 log 0 = 0`.
pub fn shannon_entropy(mu: &ProbabilityMeasure) -> f64 {
    entropy_of(mu.weights())
}

#[derive(Clone, Debug)]
pub struct ChannelModel {
    priors: ProbabilityMeasure,
    states: Vec<DensityOperator>,
    povm: Povm,
}

impl ChannelModel {
    /// Preparations are labelled `"1".."n"`.
    pub fn new(priors: Vec<f64>, states: Vec<DensityOperator>, povm: Povm) -> Result<Self> {
        let labels = OutcomeSpace::numbered(priors.len())?;
        Self::with_labels(labels, priors, states, povm)
    }

    pub fn with_labels(labels: OutcomeSpace, priors: Vec<f64>, states: Vec<DensityOperator>, povm: Povm) -> Result<Self> {
        if states.len() != labels.len() {
            return Err(Error::domain(format!("{} priors for {} states", labels.len(), states.len())));
        }
        if let Some(s) = states.iter().find(|s| s.dim() != povm.dim()) {
            return Err(Error::domain(format!(
                "state of dimension {} with a POVM of dimension {}",
                s.dim(),
                povm.dim()
            )));
        }
        Ok(ChannelModel {
            priors: ProbabilityMeasure::new(labels, priors)?,
            states,
            povm,
        })
    }

    pub fn priors(&self) -> &[f64] {
        self.priors.weights()
    }

    pub fn labels(&self) -> &[String] {
        self.priors.space().labels()
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.povm.dim()
    }

    /// Finite-set domain over the preparation labels.
    pub fn prep_domain(&self) -> ParamDomain {
        ParamDomain::new(vec![ParamComponent::finite_set("prep", self.labels().iter().cloned())])
            .expect("a single finite-set component is a valid domain")
    }

    /// One grid point per preparation, in label order.
    pub fn prep_grid(&self) -> ParamGrid {
        let d = self.prep_domain();
        ParamGrid::cartesian(d, &[(0..self.len()).map(|i| i as f64).collect()]).expect("labels are distinct")
    }

    /// The channel as a quantum model over [`prep_domain`](Self::prep_domain).
    pub fn as_model(&self) -> Result<QuantumModel> {
        let grid = self.prep_grid();
        let states = grid.points().iter().cloned().zip(self.states.iter().cloned()).collect();
        let rho_fn = Family::tabulated(grid.domain().clone(), states)?;
        let povm_fn = Family::constant("channel POVM", grid.domain().clone(), self.povm.clone());
        QuantumModel::new(self.dim(), self.povm.space().clone(), rho_fn, povm_fn)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<String>>,
    pub elements: Vec<OperatorJson>,
}

/// File form of a channel. Missing labels default to `"1".."n"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelJson {
    pub priors: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub states: Vec<OperatorJson>,
    pub povm: PovmJson,
}

impl TryFrom<ChannelJson> for ChannelModel {
    type Error = Error;

    fn try_from(j: ChannelJson) -> Result<Self> {
        let outcomes = match j.povm.outcomes {
            Some(o) => OutcomeSpace::new(o)?,
            None => OutcomeSpace::numbered(j.povm.elements.len())?,
        };
        let mats = j.povm.elements.iter().map(OperatorJson::to_matrix).collect::<Result<Vec<_>>>()?;
        let povm = Povm::from_matrices(outcomes, mats)?;
        let states = j
            .states
            .iter()
            .map(|s| DensityOperator::new(s.to_matrix()?))
            .collect::<Result<Vec<_>>>()?;
        let labels = match j.labels {
            Some(l) => OutcomeSpace::new(l)?,
            None => OutcomeSpace::numbered(j.priors.len())?,
        };
        ChannelModel::with_labels(labels, j.priors, states, povm)
    }
}

impl From<&ChannelModel> for ChannelJson {
    fn from(ch: &ChannelModel) -> Self {
        ChannelJson {
            priors: ch.priors().to_vec(),
            labels: Some(ch.labels().to_vec()),
            states: ch.states.iter().map(|s| OperatorJson::from(s.matrix())).collect(),
            povm: PovmJson {
                outcomes: Some(ch.povm.space().labels().to_vec()),
                elements: ch.povm.elements().iter().map(|e| OperatorJson::from(e.matrix())).collect(),
            },
        }
    }
}

/// Tabulated PPM `mu^(i)(j) = Tr[rho^(i) M(j)]` over the preparation labels.
pub fn conditional_ppm(ch: &ChannelModel) -> Result<Ppm> {
    let grid = ch.prep_grid();
    let entries = grid
        .points()
        .iter()
        .zip(&ch.states)
        .map(|(k, rho)| {
            let mut w = ch
                .povm
                .elements()
                .iter()
                .map(|m| born_probability(rho, m))
                .collect::<Result<Vec<_>>>()?;
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > tol::BORN_SUM {
                return Err(Error::invariant("trace-rule weight total", (total - 1.0).abs(), tol::BORN_SUM));
            }
            w.iter_mut().for_each(|x| *x /= total);
            Ok((k.clone(), ProbabilityMeasure::new(ch.povm.space().clone(), w)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ppm::tabulated(grid.domain().clone(), ch.povm.space().clone(), entries)
}

fn mutual_information_of(priors: &[f64], rows: &[&ProbabilityMeasure]) -> f64 {
    let m = rows.first().map_or(0, |r| r.weights().len());
    let mut output = vec![0.0; m];
    for (p, row) in priors.iter().zip(rows) {
        for (o, w) in output.iter_mut().zip(row.weights()) {
            *o += p * w;
        }
    }
    let conditional: f64 = priors.iter().zip(rows).map(|(p, r)| p * shannon_entropy(r)).sum();
    (entropy_of(&output) - conditional).max(0.0)
}

/// `H(sum_i p_i mu_i) - sum_i p_i H(mu_i)`.
pub fn mutual_information(ch: &ChannelModel) -> Result<f64> {
    let ppm = conditional_ppm(ch)?;
    let rows: Vec<&ProbabilityMeasure> = ppm.table().expect("tabulated").iter().map(|(_, m)| m).collect();
    Ok(mutual_information_of(ch.priors(), &rows))
}

/// Mutual information of priors over the points of a tabulated PPM, in
/// table order.
pub fn ppm_mutual_information(priors: &[f64], mu: &Ppm) -> Result<f64> {
    let table = mu.table().ok_or_else(|| Error::domain("mutual information needs a tabulated PPM"))?;
    if table.len() != priors.len() {
        return Err(Error::domain(format!("{} priors for {} table rows", priors.len(), table.len())));
    }
    let rows: Vec<&ProbabilityMeasure> = table.iter().map(|(_, m)| m).collect();
    Ok(mutual_information_of(priors, &rows))
}

/// `S(sum_i p_i rho_i) - sum_i p_i S(rho_i)`.
pub fn holevo_chi(priors: &[f64], states: &[DensityOperator]) -> Result<f64> {
    Ok(holevo_parts(priors, states)?.0)
}

// chi together with the ascending mixture spectrum.
fn holevo_parts(priors: &[f64], states: &[DensityOperator]) -> Result<(f64, Vec<f64>)> {
    if priors.len() != states.len() || states.is_empty() {
        return Err(Error::domain(format!("{} priors for {} states", priors.len(), states.len())));
    }
    ProbabilityMeasure::new(OutcomeSpace::numbered(priors.len())?, priors.to_vec())?;
    let parts: Vec<(f64, &DensityOperator)> = priors.iter().copied().zip(states).collect();
    let mix = DensityOperator::mixture(&parts)?;
    let mean: f64 = parts.iter().map(|(p, s)| p * von_neumann_entropy(s)).sum();
    Ok(((von_neumann_entropy(&mix) - mean).max(0.0), mix.spectrum()))
}

/// Model in dimension `|outcomes|` with `rho_i = diag(mu_i)` and the
/// projective POVM onto the basis. It generates the channel's conditional
/// PPM and its chi equals the mutual information.
pub fn measurement_diagonal_model(ch: &ChannelModel) -> Result<QuantumModel> {
    let ppm = conditional_ppm(ch)?;
    let m = ch.povm.space().len();
    let table = ppm.table().expect("tabulated");
    let states = table
        .iter()
        .map(|(k, mu)| {
            let d = nalgebra::DVector::from_iterator(m, mu.weights().iter().map(|&w| num_complex::Complex64::new(w, 0.0)));
            Ok((k.clone(), DensityOperator::new(CMatrix::from_diagonal(&d))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let projectors = (0..m)
        .map(|j| Ok(DetectionOperator::projector(&Ket::basis(m, j)?)))
        .collect::<Result<Vec<_>>>()?;
    let povm = Povm::new(ch.povm.space().clone(), projectors)?;
    let domain = ch.prep_domain();
    QuantumModel::new(
        m,
        ch.povm.space().clone(),
        Family::tabulated(domain.clone(), states)?,
        Family::constant("basis projectors", domain, povm),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelChi {
    pub model: String,
    pub dim: usize,
    pub chi: f64,
    /// Largest trace-rule deviation from the conditional PPM.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalRow {
    pub label: String,
    pub prior: f64,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InformationChain {
    pub i_le_chi: bool,
    pub i_le_tightened: bool,
    pub tightened_le_chi: bool,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub mutual_information: f64,
    pub chi: f64,
    pub tightened_chi: f64,
    /// Always `"upper envelope over enumerated model family"`.
    pub bound_kind: String,
    pub models: Vec<ModelChi>,
    pub prior_entropy: f64,
    pub output: Vec<f64>,
    pub mixture_eigenvalues: Vec<f64>,
    pub conditional: Vec<ConditionalRow>,
    pub chain: InformationChain,
}

impl ChannelReport {
    pub fn passed(&self) -> bool {
        self.chain.i_le_chi && self.chain.i_le_tightened && self.chain.tightened_le_chi
    }
}

/// Tightened bound over the given and canonical models.
pub fn tightened_bound(ch: &ChannelModel) -> Result<ChannelReport> {
    tightened_bound_with(ch, &[])
}

/// Tightened bound over the given model, the canonical model, and
/// `extra` named models on [`ChannelModel::prep_domain`]. Each extra model
/// must generate the conditional PPM within [`tol::MODEL_MATCH`].
pub fn tightened_bound_with(ch: &ChannelModel, extra: &[(String, QuantumModel)]) -> Result<ChannelReport> {
    let ppm = conditional_ppm(ch)?;
    let grid = ch.prep_grid();
    let table = ppm.table().expect("tabulated");
    let rows: Vec<&ProbabilityMeasure> = table.iter().map(|(_, m)| m).collect();
    let info = mutual_information_of(ch.priors(), &rows);

    let (chi, mixture_eigenvalues) = holevo_parts(ch.priors(), &ch.states)?;
    let mut models = vec![ModelChi {
        model: "given".into(),
        dim: ch.dim(),
        chi,
        residual: 0.0,
    }];
    let canonical = canonical_model(&ppm)?;
    let mut family: Vec<(String, &QuantumModel)> = vec![("canonical".into(), &canonical)];
    family.extend(extra.iter().map(|(n, m)| (n.clone(), m)));
    for (name, model) in family {
        let check = model_generates(model, &ppm, &grid, tol::MODEL_MATCH)?;
        if !check.passed {
            return Err(Error::invariant(
                format!("model '{name}' generating the conditional PPM"),
                check.max_violation,
                tol::MODEL_MATCH,
            ));
        }
        let states = grid.points().iter().map(|k| model.state(k)).collect::<Result<Vec<_>>>()?;
        models.push(ModelChi {
            model: name,
            dim: model.dim(),
            chi: holevo_chi(ch.priors(), &states)?,
            residual: check.max_violation,
        });
    }
    let tightened_chi = models.iter().map(|m| m.chi).fold(f64::INFINITY, f64::min);

    let mut output = vec![0.0; ch.povm.space().len()];
    for (p, row) in ch.priors().iter().zip(&rows) {
        for (o, w) in output.iter_mut().zip(row.weights()) {
            *o += p * w;
        }
    }
    let slack = tol::INFO_CHAIN;
    Ok(ChannelReport {
        mutual_information: info,
        chi,
        tightened_chi,
        bound_kind: "upper envelope over enumerated model family".into(),
        models,
        prior_entropy: shannon_entropy(&ch.priors),
        output,
        mixture_eigenvalues,
        conditional: ch
            .labels()
            .iter()
            .zip(ch.priors())
            .zip(&rows)
            .map(|((l, &p), r)| ConditionalRow {
                label: l.clone(),
                prior: p,
                weights: r.weights().to_vec(),
            })
            .collect(),
        chain: InformationChain {
            i_le_chi: info <= chi + slack,
            i_le_tightened: info <= tightened_chi + slack,
            tightened_le_chi: tightened_chi <= chi + slack,
            slack,
        },
    })
}

/// The point of the preparation grid carrying label index `i`.
pub fn prep_point(i: usize) -> ParamPoint {
    ParamPoint::raw(vec![i as f64])
}
