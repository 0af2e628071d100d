use num_complex::Complex;

use super::matrix::{hermitian_eigenvalues, ComplexMatrix};
use super::state::{compress, validate_keep};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Density matrix on `n_qubits` qubits, same bit layout as [`super::StateVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    n_qubits: usize,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and eigenvalues ≥ -1e-10.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let dim = matrix.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        matrix.ensure_hermitian(T::tol(1e-12))?;
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::tol(1e-12) || tr.im.abs() > T::tol(1e-12) {
            return Err(Error::InvalidTrace(tr.re.as_f64()));
        }
        let lowest = hermitian_eigenvalues(&matrix)?[0];
        if lowest < -T::tol(1e-10) {
            return Err(Error::NegativeEigenvalue(lowest.as_f64()));
        }
        Ok(Self::from_parts(dim.trailing_zeros() as usize, matrix))
    }

    /// Diagonal single-qubit state `diag(1 - p, p)`.
    pub fn qubit_diagonal(p: T) -> Result<Self> {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 0)] = Complex::new(T::one() - p, T::zero());
        m[(1, 1)] = Complex::new(p, T::zero());
        Self::new(m)
    }

    pub(crate) fn from_parts(n_qubits: usize, matrix: ComplexMatrix<T>) -> Self {
        Self { n_qubits, matrix }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// `⟨1|ρ|1⟩` for a single qubit.
    pub fn excited_population(&self) -> T {
        debug_assert_eq!(self.n_qubits, 1);
        self.matrix[(1, 1)].re
    }

    /// `ρ ⊗ σ`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_parts(self.n_qubits + other.n_qubits, self.matrix.kron(&other.matrix))
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Ok(Self::from_parts(self.n_qubits, m))
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Partial trace onto `keep`, ordered as given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        validate_keep(keep, self.n_qubits)?;
        let n = self.n_qubits;
        let mask = |q: usize| 1usize << (n - 1 - q);
        let keep_masks: Vec<usize> = keep.iter().map(|&q| mask(q)).collect();
        let env_masks: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).map(mask).collect();
        let kdim = 1usize << keep.len();
        let edim = 1usize << env_masks.len();

        // full index for every (kept, env) pair
        let mut full = vec![0usize; kdim * edim];
        for x in 0..(1usize << n) {
            full[compress(x, &keep_masks) * edim + compress(x, &env_masks)] = x;
        }
        let rho = ComplexMatrix::from_fn(kdim, |a, b| {
            (0..edim).fold(Complex::new(T::zero(), T::zero()), |s, e| {
                s + self.matrix[(full[a * edim + e], full[b * edim + e])]
            })
        });
        Ok(Self::from_parts(keep.len(), rho))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::StateVector;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn validation_errors() {
        let mut m = ComplexMatrix::<f64>::identity(2);
        assert!(matches!(DensityMatrix::new(m.clone()), Err(Error::InvalidTrace(_))));
        m = m.scaled(c(0.5, 0.0));
        m[(0, 1)] = c(0.0, 0.2);
        assert!(matches!(DensityMatrix::new(m.clone()), Err(Error::NotHermitian { .. })));
        let neg = ComplexMatrix::from_row_major(2, vec![c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]).unwrap();
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NegativeEigenvalue(_))));
        assert!(DensityMatrix::qubit_diagonal(0.3).is_ok());
    }

    #[test]
    fn partial_trace_of_pure_matches_state_reduction() {
        let amps: Vec<_> = (0..8).map(|k| c((k as f64 + 1.0).sin(), (k as f64 * 0.3).cos())).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let s = StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap();
        for keep in [vec![0], vec![2], vec![2, 0], vec![0, 1, 2], vec![1, 2]] {
            let a = s.reduced_density_matrix(&keep).unwrap();
            let b = s.density_matrix().partial_trace(&keep).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14, "keep {keep:?}");
        }
    }
}
