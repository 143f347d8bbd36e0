//! Collective spin operators `J_a = ½ Σ_i σ_a^(i)`.
//!
//! A state is decoherence-free under collective noise exactly when all three
//! annihilate it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::statevec::{Mat2, StateVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

impl SpinAxis {
    pub const ALL: [SpinAxis; 3] = [SpinAxis::X, SpinAxis::Y, SpinAxis::Z];

    pub fn pauli(self) -> Mat2 {
        match self {
            SpinAxis::X => [[ZERO, ONE], [ONE, ZERO]],
            SpinAxis::Y => [[ZERO, -I], [I, ZERO]],
            SpinAxis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }
}

/// `J_a |ψ>`.
pub fn collective_spin(axis: SpinAxis, psi: &StateVector) -> StateVector {
    let pauli = axis.pauli();
    let mut acc = vec![ZERO; psi.dim()];
    for q in 0..psi.n_qubits() {
        let mut term = psi.clone();
        term.apply_single_in_place(q, &pauli);
        for (a, t) in acc.iter_mut().zip(term.amplitudes()) {
            *a += t * 0.5;
        }
    }
    StateVector::new(psi.n_qubits(), acc).expect("same shape as input")
}

/// `[‖J_x ψ‖, ‖J_y ψ‖, ‖J_z ψ‖]`.
pub fn spin_residuals(psi: &StateVector) -> [f64; 3] {
    SpinAxis::ALL.map(|axis| collective_spin(axis, psi).norm())
}

/// True when every collective spin component annihilates `psi` to within `tol`.
pub fn is_decoherence_free(psi: &StateVector, tol: f64) -> bool {
    spin_residuals(psi).iter().all(|r| *r < tol)
}

/// The stacked `[J_x; J_y; J_z]` matrix, of shape `3·2^n × 2^n`.
pub(crate) fn stacked_spin_matrix(n_qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::from_element(3 * dim, dim, ZERO);
    for col in 0..dim {
        let mut e = vec![ZERO; dim];
        e[col] = ONE;
        let basis = StateVector::new(n_qubits, e).expect("capacity checked by caller");
        for (block, axis) in SpinAxis::ALL.into_iter().enumerate() {
            let image = collective_spin(axis, &basis);
            for (row, a) in image.amplitudes().iter().enumerate() {
                m[(block * dim + row, col)] = *a;
            }
        }
    }
    m
}
