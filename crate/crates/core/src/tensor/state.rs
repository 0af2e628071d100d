use num_complex::Complex;

use super::density::DensityMatrix;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pure state of `n_qubits` qubits.
///
/// Qubit 0 is the most significant bit of the amplitude index, so for three
/// qubits amplitude 4 (`0b100`) is `|1⟩ ⊗ |0⟩ ⊗ |0⟩`. In the collision
/// models qubit 0 is the system and qubits `1..=N_A` are the ancillas in
/// collision order. Every partial trace in the crate follows this layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩`.
    pub fn zero_state(n_qubits: usize) -> Self {
        Self::basis_state(n_qubits, 0)
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        assert!(n_qubits > 0, "a state needs at least one qubit");
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1 << n_qubits];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Checks the length and that `Σ|a|² = 1` within 1e-12.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let state = Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::NotNormalized(norm.as_f64()));
        }
        Ok(state)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask of `qubit` inside an amplitude index.
    #[inline]
    pub(crate) fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// `self ⊗ other`, with `self` taking the low qubit indices.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|&b| a * b));
        }
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }

    /// Applies a 4×4 gate to qubits `(i, j)` in place. The gate's basis is
    /// `|q_i q_j⟩` with `q_i` the more significant bit.
    pub fn apply_two_qubit_gate(&mut self, gate: &ComplexMatrix<T>, i: usize, j: usize) -> Result<()> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(Error::SameQubit(i));
        }
        if gate.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: gate.dim(),
            });
        }
        gate.ensure_unitary(T::tol(1e-10))?;
        self.apply_two_qubit_unchecked(gate, i, j);
        Ok(())
    }

    pub(crate) fn apply_two_qubit_unchecked(&mut self, gate: &ComplexMatrix<T>, i: usize, j: usize) {
        let (bi, bj) = (self.mask(i), self.mask(j));
        let g = gate.as_slice();
        let zero = Complex::new(T::zero(), T::zero());
        for base in 0..self.amplitudes.len() {
            if base & (bi | bj) != 0 {
                continue;
            }
            let idx = [base, base | bj, base | bi, base | bi | bj];
            let old = idx.map(|k| self.amplitudes[k]);
            for (r, &k) in idx.iter().enumerate() {
                let mut acc = zero;
                for c in 0..4 {
                    acc += g[4 * r + c] * old[c];
                }
                self.amplitudes[k] = acc;
            }
        }
    }

    /// Applies a full-register unitary. Used for dense cross-checks.
    pub fn apply_unitary(&mut self, u: &ComplexMatrix<T>) -> Result<()> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: u.dim(),
            });
        }
        let n = self.dim();
        let s = u.as_slice();
        let out: Vec<_> = (0..n)
            .map(|r| {
                s[r * n..(r + 1) * n]
                    .iter()
                    .zip(&self.amplitudes)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect();
        self.amplitudes = out;
        Ok(())
    }

    /// Probability of finding `qubit` in `|1⟩`.
    pub fn excited_population(&self, qubit: usize) -> Result<T> {
        self.check_qubit(qubit)?;
        let m = self.mask(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(k, _)| k & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density_matrix(&self) -> DensityMatrix<T> {
        let n = self.dim();
        let m = ComplexMatrix::from_fn(n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix::from_parts(self.n_qubits, m)
    }

    /// `tr_{complement}|ψ⟩⟨ψ|`, with the kept qubits ordered as in `keep`.
    pub fn reduced_density_matrix(&self, keep: &[usize]) -> Result<DensityMatrix<T>> {
        validate_keep(keep, self.n_qubits)?;
        let k = keep.len();
        let e = self.n_qubits - k;
        let kdim = 1usize << k;
        let edim = 1usize << e;
        let env: Vec<usize> = (0..self.n_qubits).filter(|q| !keep.contains(q)).collect();
        let keep_masks: Vec<usize> = keep.iter().map(|&q| self.mask(q)).collect();
        let env_masks: Vec<usize> = env.iter().map(|&q| self.mask(q)).collect();

        // grouped[env][kept]
        let zero = Complex::new(T::zero(), T::zero());
        let mut grouped = vec![zero; self.dim()];
        for (x, &amp) in self.amplitudes.iter().enumerate() {
            let a = compress(x, &keep_masks);
            let b = compress(x, &env_masks);
            grouped[b * kdim + a] = amp;
        }
        let mut rho = ComplexMatrix::zeros(kdim);
        for row in grouped.chunks_exact(kdim).take(edim) {
            for a in 0..kdim {
                let ra = row[a];
                if ra == zero {
                    continue;
                }
                for b in 0..kdim {
                    rho[(a, b)] += ra * row[b].conj();
                }
            }
        }
        Ok(DensityMatrix::from_parts(k, rho))
    }
}

/// Packs the bits of `x` selected by `masks` (first mask → most significant).
#[inline]
pub(crate) fn compress(x: usize, masks: &[usize]) -> usize {
    masks
        .iter()
        .fold(0, |acc, &m| (acc << 1) | usize::from(x & m != 0))
}

pub(crate) fn validate_keep(keep: &[usize], n_qubits: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    for (pos, &q) in keep.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if keep[..pos].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}
