//! Two-photon polarization states and single-photon analyzer POVMs.
//!
//! Tensor-product basis order is `(x_A x_B, x_A y_B, y_A x_B, y_A y_B)`.
//! Analyzer parameters follow the half-angle convention: parameter `theta`
//! passes the polarization at physical angle `theta / 2`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::measure::OutcomeSpace;
use crate::quantum::linalg::kron;
use crate::quantum::{DetectionOperator, Ket, Povm};

/// `(|xx> + |yy>) / sqrt 2`.
pub fn bell_state() -> Ket {
    Ket::from_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).expect("unit norm")
}

/// `(|xy> - |yx>) / sqrt 2`.
pub fn singlet_state() -> Ket {
    Ket::from_real(&[0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0]).expect("unit norm")
}

pub fn side_space(side: &str) -> OutcomeSpace {
    OutcomeSpace::new([format!("1{side}"), format!("2{side}")]).expect("distinct labels")
}

/// Projector onto `cos(theta/2)|x> + sin(theta/2)|y>` and its complement.
pub fn linear_povm(theta: f64, space: OutcomeSpace) -> Povm {
    elliptical_povm(theta, 0.0, space)
}

/// Projector onto `cos(theta/2)|x> + e^{i phi} sin(theta/2)|y>` and its
/// complement.
pub fn elliptical_povm(theta: f64, phi: f64, space: OutcomeSpace) -> Povm {
    let (s, c) = (theta / 2.0).sin_cos();
    let ket = Ket::normalized(vec![Complex64::new(c, 0.0), Complex64::from_polar(s, phi)]).expect("unit norm");
    Povm::binary_projective(space, &ket).expect("two outcomes, qubit projector")
}

/// `M_A(i) (x) M_B(j)` in joint outcome order (B index fastest).
pub fn product_povm(a: &Povm, b: &Povm, joint: OutcomeSpace) -> crate::Result<Povm> {
    let mut elements = Vec::with_capacity(a.elements().len() * b.elements().len());
    for ea in a.elements() {
        for eb in b.elements() {
            elements.push(DetectionOperator::new(kron(ea.matrix(), eb.matrix()))?);
        }
    }
    Povm::new(joint, elements)
}
