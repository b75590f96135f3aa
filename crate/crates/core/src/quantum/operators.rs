use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::{
    c, clamp_nonnegative, hermitian_eigenvalues, hermiticity_residual, identity_residual, trace, CMatrix, CVector,
};
use crate::error::{Error, Result};
use crate::measure::{Event, OutcomeSpace};
use crate::tol;

/// Unit vector in a finite-dimensional complex Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: CVector,
}

impl Ket {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::domain("ket must have positive dimension"));
        }
        let v = CVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > tol::STATE {
            return Err(Error::invariant("ket norm", (norm - 1.0).abs(), tol::STATE));
        }
        Ok(Ket { amplitudes: v })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| c(x)).collect())
    }

    /// Scale an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = CVector::from_vec(amplitudes);
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(Ket { amplitudes: v / c(n) })
    }

    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::domain(format!("basis index {i} out of range for dimension {dim}")));
        }
        let mut v = CVector::zeros(dim);
        v[i] = c(1.0);
        Ok(Ket { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::domain("inner product of kets of different dimension"));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|self><self|`.
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// `|self>|other>` with `other` as the fast index.
    pub fn tensor(&self, other: &Ket) -> Ket {
        Ket {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    pub fn apply(&self, u: &CMatrix) -> Result<Ket> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::domain("operator dimension does not match ket"));
        }
        Ket::normalized((u * &self.amplitudes).iter().copied().collect())
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let h = hermiticity_residual(&matrix);
        if h > tol::STATE {
            return Err(Error::invariant("density operator hermiticity", h, tol::STATE));
        }
        let t = trace(&matrix);
        let tr_res = (t - c(1.0)).norm();
        if tr_res > tol::STATE {
            return Err(Error::invariant("density operator trace", tr_res, tol::STATE));
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -tol::EIGEN_CLAMP {
            return Err(Error::invariant("density operator minimum eigenvalue", -min, tol::EIGEN_CLAMP));
        }
        Ok(DensityOperator { matrix })
    }

    pub fn pure(ket: &Ket) -> Self {
        DensityOperator {
            matrix: ket.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        Ok(DensityOperator {
            matrix: CMatrix::identity(dim, dim) * c(1.0 / dim as f64),
        })
    }

    /// Convex combination `sum_i p_i rho_i`.
    pub fn mixture(components: &[(f64, &DensityOperator)]) -> Result<Self> {
        let (_, first) = components
            .first()
            .ok_or_else(|| Error::domain("mixture of zero states"))?;
        let d = first.dim();
        let mut m = CMatrix::zeros(d, d);
        for (p, rho) in components {
            if rho.dim() != d {
                return Err(Error::domain("mixture of states of different dimension"));
            }
            if *p < 0.0 {
                return Err(Error::domain("mixture weights must be nonnegative"));
            }
            m += rho.matrix() * c(*p);
        }
        DensityOperator::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues clamped to be nonnegative, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut v = hermitian_eigenvalues(&self.matrix);
        // Validated at construction, so clamping cannot fail.
        clamp_nonnegative(&mut v, "density operator").expect("validated density operator");
        v
    }
}

/// Hermitian operator with spectrum in `[0, 1]`, the detection operator of one
/// outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectionOperator {
    matrix: CMatrix,
}

impl DetectionOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let h = hermiticity_residual(&matrix);
        if h > tol::HERMITIAN {
            return Err(Error::invariant("detection operator hermiticity", h, tol::HERMITIAN));
        }
        let eig = hermitian_eigenvalues(&matrix);
        let (lo, hi) = (eig[0], eig[eig.len() - 1]);
        if lo < -tol::EIGEN_CLAMP {
            return Err(Error::invariant("detection operator minimum eigenvalue", -lo, tol::EIGEN_CLAMP));
        }
        if hi > 1.0 + tol::EIGEN_CLAMP {
            return Err(Error::invariant("detection operator maximum eigenvalue", hi - 1.0, tol::EIGEN_CLAMP));
        }
        Ok(DetectionOperator { matrix })
    }

    /// Projector onto a ket; valid by construction.
    pub fn projector(ket: &Ket) -> Self {
        DetectionOperator {
            matrix: ket.projector(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// One detection operator per outcome, summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    space: OutcomeSpace,
    elements: Vec<DetectionOperator>,
}

impl Povm {
    pub fn new(space: OutcomeSpace, elements: Vec<DetectionOperator>) -> Result<Self> {
        if elements.len() != space.len() {
            return Err(Error::domain(format!(
                "{} POVM elements for {} outcomes",
                elements.len(),
                space.len()
            )));
        }
        let d = elements[0].dim();
        if elements.iter().any(|e| e.dim() != d) {
            return Err(Error::domain("POVM elements have different dimensions"));
        }
        let r = Self::completeness_residual(elements.iter().map(DetectionOperator::matrix));
        if r > tol::POVM_COMPLETENESS {
            return Err(Error::invariant("POVM completeness", r, tol::POVM_COMPLETENESS));
        }
        Ok(Povm { space, elements })
    }

    /// Build from raw matrices, validating each element.
    pub fn from_matrices(space: OutcomeSpace, matrices: Vec<CMatrix>) -> Result<Self> {
        let elements = matrices
            .into_iter()
            .map(DetectionOperator::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, elements)
    }

    /// The two-outcome projective measurement `{P, 1 - P}` for a ket.
    pub fn binary_projective(space: OutcomeSpace, ket: &Ket) -> Result<Self> {
        let p = ket.projector();
        let d = ket.dim();
        let q = CMatrix::identity(d, d) - &p;
        Self::new(space, vec![DetectionOperator { matrix: p }, DetectionOperator { matrix: q }])
    }

    /// Entrywise deviation of the element sum from the identity.
    pub fn completeness_residual<'a>(mut matrices: impl Iterator<Item = &'a CMatrix>) -> f64 {
        let Some(first) = matrices.next() else {
            return f64::INFINITY;
        };
        let sum = matrices.fold(first.clone(), |acc, m| acc + m);
        identity_residual(&sum)
    }

    pub fn space(&self) -> &OutcomeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn elements(&self) -> &[DetectionOperator] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &DetectionOperator {
        &self.elements[i]
    }

    /// Detection operator of an event: the sum of its singleton elements.
    pub fn event_operator(&self, event: &Event) -> Result<DetectionOperator> {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for &i in event.members() {
            m += self
                .elements
                .get(i)
                .ok_or_else(|| Error::domain(format!("event index {i} out of range")))?
                .matrix();
        }
        Ok(DetectionOperator { matrix: m })
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(Error::domain(format!("operator must be square and nonempty, got {}x{}", m.nrows(), m.ncols())));
    }
    Ok(())
}

/// `{"dim": d, "re": [[...]], "im": [[...]]}` row-major operator encoding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for OperatorJson {
    fn from(m: &CMatrix) -> Self {
        let n = m.nrows();
        OperatorJson {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect(),
        }
    }
}

impl OperatorJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !rows_ok(&self.re) || !rows_ok(&self.im) {
            return Err(Error::domain(format!("operator arrays are not {n}x{n}")));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(self.re[i][j], self.im[i][j])))
    }
}
