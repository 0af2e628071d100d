use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, Matrix, SymmetricEigen};
use crate::scalar::Real;

/// Square dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_row_major(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Real matrix promoted to complex entries.
    pub fn from_real(m: &Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        Ok(Self::from_fn(m.rows(), |i, j| Complex::new(m[(i, j)], T::zero())))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        let n = self.dim;
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == zero {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out.data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ rhs`; `self` occupies the more significant index.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        Self::from_fn(a * b, |i, j| self[(i / b, j / b)] * rhs[(i % b, j % b)])
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |s, i| s + self[(i, i)])
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).norm()))
    }

    /// `max |H_ij - conj(H_ji)|`.
    pub fn hermitian_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |U U† - I|`.
    pub fn unitarity_deviation(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    s += self[(i, k)] * self[(j, k)].conj();
                }
                if i == j {
                    s -= Complex::new(T::one(), T::zero());
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    pub fn ensure_hermitian(&self, tol: T) -> Result<()> {
        let asym = self.hermitian_asymmetry();
        if asym > tol {
            return Err(Error::NotHermitian {
                max_asymmetry: asym.as_f64(),
            });
        }
        Ok(())
    }

    pub fn ensure_unitary(&self, tol: T) -> Result<()> {
        let dev = self.unitarity_deviation();
        if !(dev <= tol) {
            return Err(Error::NotUnitary {
                deviation: dev.as_f64(),
            });
        }
        Ok(())
    }

    /// Real symmetric embedding `[[A, -B], [B, A]]` of a Hermitian `A + iB`.
    /// Every eigenvalue of the Hermitian matrix appears twice in the embedding.
    pub(crate) fn real_embedding(&self) -> Matrix<T> {
        let n = self.dim;
        Matrix::from_fn(2 * n, 2 * n, |i, j| {
            let z = self[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
    }
}

/// Recovers the complex matrix whose real embedding is `m`.
fn from_embedding<T: Real>(m: &Matrix<T>) -> ComplexMatrix<T> {
    let n = m.rows() / 2;
    ComplexMatrix::from_fn(n, |i, j| Complex::new(m[(i, j)], m[(i + n, j)]))
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// Ascending eigenvalues of a Hermitian matrix. The caller is responsible for
/// Hermiticity; only the lower triangle of the embedding is read.
pub fn hermitian_eigenvalues<T: Real>(h: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let doubled = symmetric_eigenvalues(&h.real_embedding())?;
    Ok(doubled
        .chunks_exact(2)
        .map(|p| (p[0] + p[1]) / T::lit(2.0))
        .collect())
}

/// `exp(-i · scale · H)` for Hermitian `H`, via its eigendecomposition.
pub fn hermitian_unitary<T: Real>(h: &ComplexMatrix<T>, scale: T) -> Result<ComplexMatrix<T>> {
    h.ensure_hermitian(T::tol(1e-12))?;
    let eig = SymmetricEigen::new(&h.real_embedding())?;
    let cos = from_embedding(&eig.map(|l| (scale * l).cos()));
    let sin = from_embedding(&eig.map(|l| (scale * l).sin()));
    // cos(sH) - i sin(sH)
    Ok(ComplexMatrix::from_fn(h.dim(), |i, j| {
        let c = cos[(i, j)];
        let s = sin[(i, j)];
        Complex::new(c.re + s.im, c.im - s.re)
    }))
}

/// Single-qubit Pauli X.
pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
    let (o, l) = (T::zero(), T::one());
    ComplexMatrix::from_fn(2, |i, j| Complex::new(if i != j { l } else { o }, o))
}

/// Raising operator `|1⟩⟨0|` with `|1⟩` the excited state.
pub fn sigma_plus<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2);
    m[(1, 0)] = Complex::new(T::one(), T::zero());
    m
}

/// Lowering operator `|0⟩⟨1|`.
pub fn sigma_minus<T: Real>() -> ComplexMatrix<T> {
    sigma_plus().adjoint()
}
