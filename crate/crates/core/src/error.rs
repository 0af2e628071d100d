use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H^dagger| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },
    #[error("matrix is not symmetric: max |A - A^T| = {max_asymmetry:e}")]
    NotSymmetric { max_asymmetry: f64 },
    #[error("gate is not unitary: max |U U^dagger - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit index {0} appears more than once")]
    DuplicateQubit(usize),
    #[error("a two-qubit gate needs two distinct qubits, got {0} twice")]
    SameQubit(usize),
    #[error("keep set is empty")]
    EmptyKeep,
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state vector is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),
    #[error("density matrix has eigenvalue {0:e} below zero")]
    NegativeEigenvalue(f64),
    #[error("{count} coefficients given, but a ring of {n_ancillas} sites supports at most {max}")]
    TooManyCoefficients {
        count: usize,
        n_ancillas: usize,
        max: usize,
    },
    #[error("{qubits} qubits requested, above the dense-simulation limit of {limit}")]
    ResourceGuard { qubits: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a physical Gaussian state: minimum eigenvalue of gamma + i Omega/2 is {min_eigenvalue:e}")]
    Nonphysical { min_eigenvalue: f64 },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}
