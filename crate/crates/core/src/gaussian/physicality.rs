use super::block::CovarianceBlock;
use super::ensemble::EnsembleCM;
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, Matrix};
use crate::scalar::Real;

/// Threshold on the smallest eigenvalue of `γ + iΩ/2`.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-8;

/// Anything that can present itself as a full real covariance matrix in
/// `(q_1, p_1, q_2, p_2, …)` ordering.
pub trait CovarianceMatrix<T: Real> {
    fn covariance_matrix(&self) -> Matrix<T>;
}

impl<T: Real> CovarianceMatrix<T> for CovarianceBlock<T> {
    fn covariance_matrix(&self) -> Matrix<T> {
        let m = self.entries();
        Matrix::from_fn(2, 2, |i, j| m[i][j])
    }
}

impl<T: Real> CovarianceMatrix<T> for EnsembleCM<T> {
    fn covariance_matrix(&self) -> Matrix<T> {
        self.matrix().clone()
    }
}

impl<T: Real> CovarianceMatrix<T> for Matrix<T> {
    fn covariance_matrix(&self) -> Matrix<T> {
        self.clone()
    }
}

/// `Ω = ⊕ [[0, 1], [-1, 0]]`.
pub fn symplectic_form<T: Real>(n_modes: usize) -> Matrix<T> {
    let mut omega = Matrix::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        omega[(2 * m, 2 * m + 1)] = T::one();
        omega[(2 * m + 1, 2 * m)] = -T::one();
    }
    omega
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalityReport<T> {
    /// Smallest eigenvalue of the Hermitian matrix `γ + iΩ/2`.
    pub min_eigenvalue: T,
    /// Ascending symplectic eigenvalues, one per mode. Empty when `γ` is not
    /// positive definite.
    pub symplectic_eigenvalues: Vec<T>,
    pub passed: bool,
}

/// Real symmetric representation `[[γ, -Ω/2], [Ω/2, γ]]` of `γ + iΩ/2`,
/// whose spectrum is that of the Hermitian matrix with every value doubled.
fn embedding<T: Real>(gamma: &Matrix<T>) -> Matrix<T> {
    let n = gamma.rows();
    let half = T::lit(0.5);
    let omega = |i: usize, j: usize| -> T {
        if i / 2 != j / 2 {
            T::zero()
        } else if i % 2 == 0 && j % 2 == 1 {
            half
        } else if i % 2 == 1 && j % 2 == 0 {
            -half
        } else {
            T::zero()
        }
    };
    Matrix::from_fn(2 * n, 2 * n, |a, b| match (a < n, b < n) {
        (true, true) => gamma[(a, b)],
        (false, false) => gamma[(a - n, b - n)],
        (true, false) => -omega(a, b - n),
        (false, true) => omega(a - n, b),
    })
}

fn check_input<T: Real>(gamma: &Matrix<T>) -> Result<()> {
    if gamma.rows() % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: gamma.rows() + 1,
            actual: gamma.rows(),
        });
    }
    gamma.ensure_symmetric(T::tol(1e-12))
}

/// Minimal eigenvalue of `γ + iΩ/2`.
pub fn bona_fide_min_eigenvalue<T: Real>(gamma: &Matrix<T>) -> Result<T> {
    check_input(gamma)?;
    Ok(symmetric_eigenvalues(&embedding(gamma))?[0])
}

/// Errors with [`Error::Nonphysical`] unless `γ + iΩ/2 ⪰ -εI` with
/// `ε = PHYSICALITY_TOLERANCE`. A Cholesky factorisation of `γ + iΩ/2 + εI`
/// settles most cases; the eigenvalue is only computed when it fails.
pub fn ensure_bona_fide<T: Real>(gamma: &Matrix<T>) -> Result<()> {
    check_input(gamma)?;
    let eps = T::tol(PHYSICALITY_TOLERANCE);
    let mut h = embedding(gamma);
    for i in 0..h.rows() {
        h[(i, i)] += eps;
    }
    if h.cholesky().is_some() {
        return Ok(());
    }
    let min = bona_fide_min_eigenvalue(gamma)?;
    if min < -eps {
        return Err(Error::Nonphysical {
            min_eigenvalue: min.as_f64(),
        });
    }
    Ok(())
}

/// Symplectic eigenvalues via `γ = LLᵀ`: the antisymmetric `A = LᵀΩL` is
/// similar to `Ωγ`, so `AᵀA` has every `ν_k²` twice.
pub fn symplectic_eigenvalues<T: Real>(gamma: &Matrix<T>) -> Result<Option<Vec<T>>> {
    check_input(gamma)?;
    let Some(l) = gamma.cholesky() else {
        return Ok(None);
    };
    let omega = symplectic_form::<T>(gamma.rows() / 2);
    let a = l.transpose().matmul(&omega)?.matmul(&l)?;
    let ata = a.transpose().matmul(&a)?;
    let ev = symmetric_eigenvalues(&ata)?;
    Ok(Some(ev.iter().step_by(2).map(|&x| x.max(T::zero()).sqrt()).collect()))
}

pub fn physicality_check<T: Real>(gamma: &impl CovarianceMatrix<T>) -> Result<PhysicalityReport<T>> {
    let gamma = gamma.covariance_matrix();
    let min_eigenvalue = bona_fide_min_eigenvalue(&gamma)?;
    let symplectic_eigenvalues = symplectic_eigenvalues(&gamma)?.unwrap_or_default();
    Ok(PhysicalityReport {
        min_eigenvalue,
        symplectic_eigenvalues,
        passed: min_eigenvalue >= -T::tol(PHYSICALITY_TOLERANCE),
    })
}
