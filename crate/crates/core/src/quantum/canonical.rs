//! Constructive models that reproduce any tabulated PPM: one basis vector
//! per parameter point, with the probabilities written into a diagonal POVM.

use super::linalg::{c, CMatrix};
use super::model::{model_generates, DensityOperatorFunction, PovmFunction, QuantumModel, Split};
use super::operators::{DensityOperator, DetectionOperator, Ket, Povm};
use crate::error::{Error, Result};
use crate::measure::{Family, ParamGrid, ParamPoint, Ppm};

/// Round-trip tolerance the canonical builders guarantee.
pub const ROUND_TRIP_TOL: f64 = 1e-12;

fn diagonal(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(values.len(), values.iter().map(|&v| c(v))))
}

// Diagonal entries in [0, 1] summing to one per row: valid by construction.
fn diagonal_povm(space: &crate::measure::OutcomeSpace, columns: &[Vec<f64>]) -> Result<Povm> {
    let elements = columns
        .iter()
        .map(|col| DetectionOperator::new(diagonal(col)))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(space.clone(), elements)
}

/// Model of dimension `|K|` with `rho^(k) = |k><k|` and the `k`-independent
/// POVM `M(w) = sum_k' mu^(k')(w) |k'><k'|`. Basis index follows table order.
pub fn canonical_model(mu: &Ppm) -> Result<QuantumModel> {
    let table = mu
        .table()
        .ok_or_else(|| Error::domain("canonical_model needs a tabulated PPM"))?;
    let d = table.len();
    let n_out = mu.space().len();
    let columns: Vec<Vec<f64>> = (0..n_out)
        .map(|w| table.iter().map(|(_, m)| m.weight(w)).collect())
        .collect();
    let povm = diagonal_povm(mu.space(), &columns)?;
    let states = table
        .iter()
        .enumerate()
        .map(|(i, (k, _))| Ok((k.clone(), DensityOperator::pure(&Ket::basis(d, i)?))))
        .collect::<Result<Vec<_>>>()?;
    let rho_fn: DensityOperatorFunction = Family::tabulated(mu.domain().clone(), states)?;
    let povm_fn: PovmFunction = Family::constant("canonical diagonal POVM", mu.domain().clone(), povm);
    let order: Vec<ParamPoint> = table.iter().map(|(k, _)| k.clone()).collect();
    let model = QuantumModel::new(d, mu.space().clone(), rho_fn, povm_fn)?.with_basis_order(order);
    verify_round_trip(&model, mu, &mu.table_grid()?)?;
    Ok(model)
}

/// Model respecting a prep/meas split: dimension `|prep_grid|`, states
/// `|k_prep><k_prep|`, and for each `k_meas` the diagonal POVM
/// `M^(k_meas)(w) = sum_{k_prep} mu^(k_prep || k_meas)(w) |k_prep><k_prep|`.
pub fn split_canonical_model(mu: &Ppm, split: Split, prep_grid: &ParamGrid, meas_grid: &ParamGrid) -> Result<QuantumModel> {
    let domain = mu.domain().clone();
    let prep_domain = domain.subdomain(&split.prep)?;
    let meas_domain = domain.subdomain(&split.meas)?;
    if prep_grid.domain() != &prep_domain || meas_grid.domain() != &meas_domain {
        return Err(Error::domain("prep and meas grids must lie on the split sub-domains"));
    }
    let d = prep_grid.len();
    let n_out = mu.space().len();
    let mut product_points = Vec::with_capacity(d * meas_grid.len());
    let mut povms = Vec::with_capacity(meas_grid.len());
    for km in meas_grid.points() {
        let mut columns = vec![vec![0.0; d]; n_out];
        for (i, kp) in prep_grid.points().iter().enumerate() {
            let k = domain.assemble(&[(&split.prep, kp), (&split.meas, km)])?;
            let m = mu
                .eval(&k)
                .map_err(|e| Error::domain(format!("PPM is not defined on the prep x meas product grid: {e}")))?;
            for (w, col) in columns.iter_mut().enumerate() {
                col[i] = m.weight(w);
            }
            product_points.push(k);
        }
        povms.push((km.clone(), diagonal_povm(mu.space(), &columns)?));
    }
    let states = prep_grid
        .points()
        .iter()
        .enumerate()
        .map(|(i, kp)| Ok((kp.clone(), DensityOperator::pure(&Ket::basis(d, i)?))))
        .collect::<Result<Vec<_>>>()?;
    let rho_fn: DensityOperatorFunction = Family::tabulated(prep_domain, states)?;
    let povm_fn: PovmFunction = Family::tabulated(meas_domain, povms)?;
    let model = QuantumModel::with_split(d, domain.clone(), split, mu.space().clone(), rho_fn, povm_fn)?
        .with_basis_order(prep_grid.points().to_vec());
    verify_round_trip(&model, mu, &ParamGrid::new(domain, product_points)?)?;
    Ok(model)
}

/// Canonical model with each basis vector replaced by an `r`-dimensional
/// block: `rho^(k) = (1/r) sum_s |k,s><k,s|` and
/// `M(w) = sum_k mu^(k)(w) sum_s |k,s><k,s|`. Same PPM, but every state has
/// entropy `log2 r`.
pub fn mixed_canonical_model(mu: &Ppm, multiplicity: usize) -> Result<QuantumModel> {
    if multiplicity == 0 {
        return Err(Error::domain("multiplicity must be positive"));
    }
    let table = mu
        .table()
        .ok_or_else(|| Error::domain("mixed_canonical_model needs a tabulated PPM"))?;
    let r = multiplicity;
    let d = table.len() * r;
    let columns: Vec<Vec<f64>> = (0..mu.space().len())
        .map(|w| table.iter().flat_map(|(_, m)| std::iter::repeat_n(m.weight(w), r)).collect())
        .collect();
    let povm = diagonal_povm(mu.space(), &columns)?;
    let states = table
        .iter()
        .enumerate()
        .map(|(i, (k, _))| {
            let mut diag = vec![0.0; d];
            diag[i * r..(i + 1) * r].iter_mut().for_each(|x| *x = 1.0 / r as f64);
            Ok((k.clone(), DensityOperator::new(diagonal(&diag))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let rho_fn: DensityOperatorFunction = Family::tabulated(mu.domain().clone(), states)?;
    let povm_fn: PovmFunction = Family::constant("block-diagonal POVM", mu.domain().clone(), povm);
    let model = QuantumModel::new(d, mu.space().clone(), rho_fn, povm_fn)?
        .with_basis_order(table.iter().map(|(k, _)| k.clone()).collect());
    verify_round_trip(&model, mu, &mu.table_grid()?)?;
    Ok(model)
}

fn verify_round_trip(model: &QuantumModel, mu: &Ppm, grid: &ParamGrid) -> Result<()> {
    let r = model_generates(model, mu, grid, ROUND_TRIP_TOL)?;
    if !r.passed {
        return Err(Error::invariant("canonical model round trip", r.max_violation, ROUND_TRIP_TOL));
    }
    Ok(())
}
