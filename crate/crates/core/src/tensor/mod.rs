//! Complex dense linear algebra shared by the qubit engine: Hermitian
//! exponentials, two-qubit gate application, partial traces and entropies.

mod density;
mod entropy;
mod matrix;
mod state;

pub use density::DensityMatrix;
pub use entropy::{binary_entropy, mutual_information, von_neumann_entropy};
pub use matrix::{hermitian_eigenvalues, hermitian_unitary, pauli_x, sigma_minus, sigma_plus, ComplexMatrix};
pub use state::StateVector;
