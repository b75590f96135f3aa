use num_complex::Complex64;

use super::linalg::{psd_function, psd_sqrt, trace_of_product};
use super::operators::{DensityOperator, DetectionOperator, Ket, Povm};
use crate::error::{Error, Result};
use crate::measure::{Family, OutcomeSpace, ParamDomain, ParamGrid, ParamPoint, Ppm, ProbabilityMeasure};
use crate::report::{CheckReport, CheckRow};
use crate::tol;

pub type DensityOperatorFunction = Family<DensityOperator>;
pub type PovmFunction = Family<Povm>;

/// `Tr[rho M]`, which must be real and lie in `[0, 1]` up to float noise.
pub fn born_probability(rho: &DensityOperator, m: &DetectionOperator) -> Result<f64> {
    if rho.dim() != m.dim() {
        return Err(Error::domain(format!(
            "state of dimension {} with detection operator of dimension {}",
            rho.dim(),
            m.dim()
        )));
    }
    let t = trace_of_product(rho.matrix(), m.matrix());
    if t.im.abs() > tol::IMAG_TRACE {
        return Err(Error::numerical("trace-rule probability has an imaginary part", t.im.abs()));
    }
    if t.re < -tol::EIGEN_CLAMP || t.re > 1.0 + tol::EIGEN_CLAMP {
        let r = if t.re < 0.0 { -t.re } else { t.re - 1.0 };
        return Err(Error::numerical("trace-rule probability outside [0, 1]", r));
    }
    Ok(t.re.clamp(0.0, 1.0))
}

/// `Tr[rho^(1/2) sigma^(1/2)]`.
pub fn overlap(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::domain("overlap of states of different dimension"));
    }
    let t: Complex64 = trace_of_product(&psd_sqrt(rho.matrix())?, &psd_sqrt(sigma.matrix())?);
    if t.im.abs() > tol::IMAG_TRACE {
        return Err(Error::numerical("overlap has an imaginary part", t.im.abs()));
    }
    Ok(t.re.max(0.0))
}

/// `-Tr[rho log2 rho]` in bits, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    rho.spectrum()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `log2 rho` restricted to the support of `rho` (zero on the kernel).
pub fn log2_on_support(rho: &DensityOperator) -> Result<super::linalg::CMatrix> {
    psd_function(rho.matrix(), |l| if l > 0.0 { l.log2() } else { 0.0 }, "density operator")
}

/// `cos(theta)|x> + sin(theta)|y>`.
pub fn qubit_linear_state(theta: f64) -> Ket {
    Ket::from_real(&[theta.cos(), theta.sin()]).expect("unit by construction")
}

/// Which domain components feed the preparation and which the measurement.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Split {
    pub prep: Vec<usize>,
    pub meas: Vec<usize>,
}

/// Hilbert dimension, density-operator function, and POVM function over one
/// parameter domain.
///
/// Without a split, both functions take the full parameter point. With a
/// split, the state function lives on the prep sub-domain and the POVM
/// function on the meas sub-domain, so each depends only on its own
/// components by construction.
#[derive(Clone, Debug)]
pub struct QuantumModel {
    dim: usize,
    domain: ParamDomain,
    space: OutcomeSpace,
    rho_fn: DensityOperatorFunction,
    povm_fn: PovmFunction,
    split: Option<Split>,
    basis_order: Option<Vec<ParamPoint>>,
}

impl QuantumModel {
    pub fn new(dim: usize, space: OutcomeSpace, rho_fn: DensityOperatorFunction, povm_fn: PovmFunction) -> Result<Self> {
        if rho_fn.domain() != povm_fn.domain() {
            return Err(Error::domain("state and POVM functions have different domains"));
        }
        Ok(QuantumModel {
            dim,
            domain: rho_fn.domain().clone(),
            space,
            rho_fn,
            povm_fn,
            split: None,
            basis_order: None,
        })
    }

    pub fn with_split(
        dim: usize,
        domain: ParamDomain,
        split: Split,
        space: OutcomeSpace,
        rho_fn: DensityOperatorFunction,
        povm_fn: PovmFunction,
    ) -> Result<Self> {
        let mut all: Vec<usize> = split.prep.iter().chain(&split.meas).copied().collect();
        all.sort_unstable();
        if all != (0..domain.components().len()).collect::<Vec<_>>() {
            return Err(Error::domain("split must partition the domain components"));
        }
        if rho_fn.domain() != &domain.subdomain(&split.prep)? {
            return Err(Error::domain("state function is not on the prep sub-domain"));
        }
        if povm_fn.domain() != &domain.subdomain(&split.meas)? {
            return Err(Error::domain("POVM function is not on the meas sub-domain"));
        }
        Ok(QuantumModel {
            dim,
            domain,
            space,
            rho_fn,
            povm_fn,
            split: Some(split),
            basis_order: None,
        })
    }

    pub(crate) fn with_basis_order(mut self, order: Vec<ParamPoint>) -> Self {
        self.basis_order = Some(order);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    pub fn space(&self) -> &OutcomeSpace {
        &self.space
    }

    pub fn split(&self) -> Option<&Split> {
        self.split.as_ref()
    }

    pub fn rho_fn(&self) -> &DensityOperatorFunction {
        &self.rho_fn
    }

    pub fn povm_fn(&self) -> &PovmFunction {
        &self.povm_fn
    }

    /// Parameter point assigned to each basis vector, for canonical models.
    pub fn basis_order(&self) -> Option<&[ParamPoint]> {
        self.basis_order.as_deref()
    }

    pub fn state(&self, k: &ParamPoint) -> Result<DensityOperator> {
        let k = self.domain.check(k)?;
        let rho = match &self.split {
            Some(s) => self.rho_fn.eval(&self.domain.project(&k, &s.prep)?)?,
            None => self.rho_fn.eval(&k)?,
        };
        if rho.dim() != self.dim {
            return Err(Error::domain(format!("state at {k} has dimension {}, model {}", rho.dim(), self.dim)));
        }
        Ok(rho)
    }

    pub fn povm(&self, k: &ParamPoint) -> Result<Povm> {
        let k = self.domain.check(k)?;
        let m = match &self.split {
            Some(s) => self.povm_fn.eval(&self.domain.project(&k, &s.meas)?)?,
            None => self.povm_fn.eval(&k)?,
        };
        if m.dim() != self.dim {
            return Err(Error::domain(format!("POVM at {k} has dimension {}, model {}", m.dim(), self.dim)));
        }
        m.space().ensure_same(&self.space, "model POVM")?;
        Ok(m)
    }

    /// Raw trace-rule weights `Tr[rho^(k) M^(k)(w)]` for each outcome.
    pub fn trace_rule(&self, k: &ParamPoint) -> Result<Vec<f64>> {
        let rho = self.state(k)?;
        let povm = self.povm(k)?;
        povm.elements().iter().map(|m| born_probability(&rho, m)).collect()
    }

    /// The measure generated at `k`. The weight total is checked against
    /// [`tol::BORN_SUM`] and then divided out, so the result meets the
    /// tighter measure invariant.
    pub fn measure(&self, k: &ParamPoint) -> Result<ProbabilityMeasure> {
        let mut w = self.trace_rule(k)?;
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > tol::BORN_SUM {
            return Err(Error::invariant("trace-rule weight total", (total - 1.0).abs(), tol::BORN_SUM));
        }
        w.iter_mut().for_each(|x| *x /= total);
        ProbabilityMeasure::new(self.space.clone(), w)
    }
}

/// Tabulate the PPM a model generates on a grid.
pub fn generate_ppm(model: &QuantumModel, grid: &ParamGrid) -> Result<Ppm> {
    if grid.domain() != model.domain() {
        return Err(Error::domain("grid is not on the model's domain"));
    }
    let entries = grid
        .points()
        .iter()
        .map(|k| Ok((k.clone(), model.measure(k)?)))
        .collect::<Result<Vec<_>>>()?;
    Ppm::tabulated(model.domain().clone(), model.space().clone(), entries)
}

/// The closed-form PPM of a model, evaluated lazily.
pub fn model_ppm(model: &QuantumModel, name: impl Into<String>) -> Ppm {
    let m = model.clone();
    let sp = model.space().clone();
    Ppm::closed_form(name, model.domain().clone(), sp, move |k| Ok(m.measure(k)?.weights().to_vec()))
}

/// Largest `|Tr[rho^(k) M^(k)(w)] - mu^(k)(w)|` over the grid and outcomes.
pub fn model_generates(model: &QuantumModel, mu: &Ppm, grid: &ParamGrid, tol: f64) -> Result<CheckReport> {
    model.space().ensure_same(mu.space(), "model_generates")?;
    if grid.domain() != model.domain() || grid.domain() != mu.domain() {
        return Err(Error::domain("grid, model and PPM must share a domain"));
    }
    let rows = grid
        .points()
        .iter()
        .map(|k| {
            let generated = model.trace_rule(k)?;
            let target = mu.eval(k)?;
            let violation = generated
                .iter()
                .zip(target.weights())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(CheckRow {
                point: k.clone(),
                violation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_rows("model_generates", tol, rows))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, PI};

    use super::*;
    use crate::quantum::linalg::{c, CMatrix};

    #[test]
    fn born_examples() {
        let x = qubit_linear_state(0.0);
        assert!((born_probability(&DensityOperator::pure(&x), &DetectionOperator::projector(&x)).unwrap() - 1.0).abs() < 1e-15);
        let diag = qubit_linear_state(FRAC_PI_4);
        let p = born_probability(&DensityOperator::pure(&x), &DetectionOperator::projector(&diag)).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let mixed = DensityOperator::maximally_mixed(2).unwrap();
        let any = Ket::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        assert!((born_probability(&mixed, &DetectionOperator::projector(&any)).unwrap() - 0.5).abs() < 1e-15);
        let big = DetectionOperator::projector(&Ket::basis(3, 0).unwrap());
        assert!(born_probability(&mixed, &big).is_err());
    }

    #[test]
    fn overlap_examples() {
        let a = DensityOperator::pure(&qubit_linear_state(0.3));
        assert!((overlap(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let x = DensityOperator::pure(&qubit_linear_state(0.0));
        let d = DensityOperator::pure(&qubit_linear_state(FRAC_PI_4));
        // Pure states: Tr[P_psi P_phi] = |<psi|phi>|^2 = 1/2.
        assert!((overlap(&x, &d).unwrap() - 0.5).abs() < 1e-12);
        let y = DensityOperator::pure(&qubit_linear_state(PI / 2.0));
        assert!(overlap(&x, &y).unwrap().abs() < 1e-12);
        let mixed = DensityOperator::maximally_mixed(3).unwrap();
        assert!((overlap(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&DensityOperator::pure(&qubit_linear_state(1.0))).abs() < 1e-12);
        assert!((von_neumann_entropy(&DensityOperator::maximally_mixed(2).unwrap()) - 1.0).abs() < 1e-12);
        let states: Vec<_> = [0.0, FRAC_PI_4, PI / 2.0, 3.0 * FRAC_PI_4]
            .iter()
            .map(|&t| DensityOperator::pure(&qubit_linear_state(t)))
            .collect();
        let mix = DensityOperator::mixture(&states.iter().map(|s| (0.25, s)).collect::<Vec<_>>()).unwrap();
        assert!((mix.matrix() - CMatrix::identity(2, 2) * c(0.5)).norm() < 1e-15);
        assert!((von_neumann_entropy(&mix) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_states() {
        let y = qubit_linear_state(PI / 2.0);
        assert!(y.amplitude(0).norm() < 1e-15 && (y.amplitude(1).re - 1.0).abs() < 1e-15);
        let d = qubit_linear_state(FRAC_PI_4);
        assert!((d.amplitude(0).re - 0.5_f64.sqrt()).abs() < 1e-15);
        assert!((d.amplitude(1).re - 0.5_f64.sqrt()).abs() < 1e-15);
    }
}
