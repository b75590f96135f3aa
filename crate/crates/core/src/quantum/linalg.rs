//! Small dense complex matrix helpers. Matrix functions go through the
//! Hermitian eigendecomposition only.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest entrywise `|A - A^dagger|`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut r = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            r = r.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    r
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Tr[A B]` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

/// Largest entrywise deviation from the identity.
pub fn identity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut r = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { c(1.0) } else { c(0.0) };
            r = r.max((m[(i, j)] - target).norm());
        }
    }
    r
}

fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == c(0.0)))
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = if is_diagonal(m) {
        m.diagonal().iter().map(|z| z.re).collect()
    } else {
        hermitian_part(m).symmetric_eigenvalues().iter().copied().collect()
    };
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigenvalues (unsorted) and unitary eigenvector matrix of the Hermitian
/// part of `m`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    if is_diagonal(m) {
        let n = m.nrows();
        return (m.diagonal().iter().map(|z| z.re).collect(), CMatrix::identity(n, n));
    }
    let e = hermitian_part(m).symmetric_eigen();
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Eigenvalues with values in `[-EIGEN_CLAMP, 0)` set to zero; anything lower
/// is an error.
pub(crate) fn clamp_nonnegative(vals: &mut [f64], what: &str) -> Result<()> {
    for v in vals.iter_mut() {
        if *v < -tol::EIGEN_CLAMP {
            return Err(Error::numerical(format!("{what} has a negative eigenvalue"), -*v));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(())
}

/// `f(m)` for positive semidefinite Hermitian `m`, applying `f` to the
/// clamped eigenvalues.
pub fn psd_function(m: &CMatrix, f: impl Fn(f64) -> f64, what: &str) -> Result<CMatrix> {
    let (mut vals, vecs) = hermitian_eigen(m);
    clamp_nonnegative(&mut vals, what)?;
    let n = m.nrows();
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let fv = c(f(v));
        for i in 0..n {
            scaled[(i, j)] *= fv;
        }
    }
    Ok(scaled * vecs.adjoint())
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    psd_function(m, f64::sqrt, "square-root argument")
}

/// Block-diagonal Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
