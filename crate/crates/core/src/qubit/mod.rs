//! Minimal qubit collisional model.
//!
//! A system qubit starting in `|0⟩` collides once with each ancilla of a
//! cyclic graph state through a partial swap. The uncorrelated reference
//! replaces the ancillas by independent copies of their common local state.

mod collisions;

pub use collisions::{
    run_correlated_collisions, run_uncorrelated_reference, QubitCollisionConfig, Trajectory,
};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::CirculantGraphSpec;
use crate::linalg::Matrix;
use crate::scalar::Real;
use crate::tensor::{hermitian_unitary, pauli_x, sigma_minus, sigma_plus, ComplexMatrix, StateVector};

/// Largest register the dense engine will allocate.
pub const MAX_QUBITS: usize = 22;

pub(crate) fn guard_qubits(qubits: usize) -> Result<()> {
    if qubits > MAX_QUBITS {
        return Err(Error::ResourceGuard {
            qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

pub fn build_circulant_adjacency<T: Real>(spec: &CirculantGraphSpec<T>) -> Matrix<T> {
    spec.adjacency()
}

/// `exp{-iτ(σ⁺⊗σ⁻ + σ⁻⊗σ⁺)}`.
pub fn partial_swap_gate<T: Real>(tau: T) -> Result<ComplexMatrix<T>> {
    let exchange = sigma_plus::<T>()
        .kron(&sigma_minus())
        .add(&sigma_minus::<T>().kron(&sigma_plus()))?;
    hermitian_unitary(&exchange, tau)
}

/// `exp(-i θ σx⊗σx)`.
pub fn xx_rotation<T: Real>(theta: T) -> Result<ComplexMatrix<T>> {
    hermitian_unitary(&pauli_x::<T>().kron(&pauli_x()), theta)
}

/// `exp(-ik Σ_{i,j} G_ij σx^i σx^j)|0…0⟩` built from commuting pair gates.
/// The sum runs over ordered pairs, so each bond enters as
/// `exp(-2ik G_ij σx⊗σx)`. With `include_system` a system qubit `|0⟩` is
/// prepended at index 0.
pub fn prepare_graph_state<T: Real>(spec: &CirculantGraphSpec<T>, include_system: bool) -> Result<StateVector<T>> {
    let offset = usize::from(include_system);
    let n = spec.n_ancillas();
    guard_qubits(n + offset)?;
    let mut state = StateVector::zero_state(n + offset);
    let k = spec.strength();
    let two_k = k + k;
    if k == T::zero() {
        return Ok(state);
    }
    let mut gates: HashMap<usize, ComplexMatrix<T>> = HashMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = spec.ring_distance(i, j);
            let g = spec.coefficient(d);
            if g == T::zero() {
                continue;
            }
            if !gates.contains_key(&d) {
                gates.insert(d, xx_rotation(two_k * g)?);
            }
            state.apply_two_qubit_gate(&gates[&d], i + offset, j + offset)?;
        }
    }
    Ok(state)
}

/// `p_A = ⟨1|ρ_{A_1}|1⟩` of the prepared graph state.
pub fn ancilla_local_population<T: Real>(spec: &CirculantGraphSpec<T>) -> Result<T> {
    prepare_graph_state(spec, false)?.excited_population(0)
}
