//! Gaussian graph states generated by two-mode squeezing along a graph.
//!
//! Starting from the vacuum, the quadratures transform as `q → M q` and
//! `p → M⁻¹ p` with `M = exp(kG)`, so the ancilla covariances are
//! `½ MMᵀ` for positions and `½ (MᵀM)⁻¹` for momenta, with no `q`–`p`
//! cross moments. Circulant `G` is diagonalised by the discrete Fourier
//! transform, which gives the closed forms below.

use super::block::CovarianceBlock;
use crate::error::{Error, Result};
use crate::graph::CirculantGraphSpec;
use crate::linalg::{Matrix, SymmetricEigen};
use crate::scalar::Real;

/// Graph used to prepare the ancillas.
#[derive(Debug, Clone, PartialEq)]
pub enum GaussianGraphSpec<T> {
    /// Arbitrary symmetric adjacency with zero diagonal.
    Dense { adjacency: Matrix<T>, strength: T },
    Circulant(CirculantGraphSpec<T>),
}

impl<T: Real> GaussianGraphSpec<T> {
    pub fn dense(adjacency: Matrix<T>, strength: T) -> Result<Self> {
        adjacency.ensure_symmetric(T::tol(1e-12))?;
        if (0..adjacency.rows()).any(|i| adjacency[(i, i)] != T::zero()) {
            return Err(Error::InvalidParameter("adjacency must have a zero diagonal".into()));
        }
        Ok(Self::Dense { adjacency, strength })
    }

    pub fn adjacency(&self) -> Matrix<T> {
        match self {
            Self::Dense { adjacency, .. } => adjacency.clone(),
            Self::Circulant(spec) => spec.adjacency(),
        }
    }

    pub fn strength(&self) -> T {
        match self {
            Self::Dense { strength, .. } => *strength,
            Self::Circulant(spec) => spec.strength(),
        }
    }

    pub fn n_modes(&self) -> usize {
        match self {
            Self::Dense { adjacency, .. } => adjacency.rows(),
            Self::Circulant(spec) => spec.n_ancillas(),
        }
    }
}

impl<T: Real> From<CirculantGraphSpec<T>> for GaussianGraphSpec<T> {
    fn from(spec: CirculantGraphSpec<T>) -> Self {
        Self::Circulant(spec)
    }
}

/// Position and momentum covariance matrices of the ancillas.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphCovariances<T> {
    /// `½⟨{q_i, q_j}⟩`.
    pub q: Matrix<T>,
    /// `½⟨{p_i, p_j}⟩`.
    pub p: Matrix<T>,
}

impl<T: Real> GraphCovariances<T> {
    pub fn n_modes(&self) -> usize {
        self.q.rows()
    }

    /// `γ_{A_i}`.
    pub fn local(&self, i: usize) -> CovarianceBlock<T> {
        CovarianceBlock::diag(self.q[(i, i)], self.p[(i, i)])
    }

    /// `ζ_{i,j}`.
    pub fn correlation(&self, i: usize, j: usize) -> CovarianceBlock<T> {
        CovarianceBlock::diag(self.q[(i, j)], self.p[(i, j)])
    }

    /// Interleaved `(q_1, p_1, q_2, p_2, …)` covariance matrix.
    pub fn to_matrix(&self) -> Matrix<T> {
        let n = self.n_modes();
        Matrix::from_fn(2 * n, 2 * n, |a, b| match (a % 2, b % 2) {
            (0, 0) => self.q[(a / 2, b / 2)],
            (1, 1) => self.p[(a / 2, b / 2)],
            _ => T::zero(),
        })
    }

    /// Largest entry-wise deviation over all local and pair blocks.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.q.max_abs_diff(&other.q).max(self.p.max_abs_diff(&other.p))
    }

    pub fn max_correlation_diff(&self, other: &Self) -> T {
        let n = self.n_modes();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.correlation(i, j).max_abs_diff(&other.correlation(i, j)));
                }
            }
        }
        worst
    }
}

/// `exp(kG)` by symmetric eigendecomposition.
pub fn graph_exponential<T: Real>(spec: &GaussianGraphSpec<T>) -> Result<Matrix<T>> {
    let k = spec.strength();
    Ok(SymmetricEigen::new(&spec.adjacency())?.map(|l| (k * l).exp()))
}

/// Exact ancilla covariances for any graph. Since `G` is symmetric,
/// `MMᵀ = exp(2kG)` and `(MᵀM)⁻¹ = exp(-2kG)`, both taken from one
/// eigendecomposition.
pub fn graph_cm_general<T: Real>(spec: &GaussianGraphSpec<T>) -> Result<GraphCovariances<T>> {
    let g = spec.adjacency();
    g.ensure_symmetric(T::tol(1e-12))?;
    let k = spec.strength();
    let two_k = k + k;
    let half = T::lit(0.5);
    let eig = SymmetricEigen::new(&g)?;
    Ok(GraphCovariances {
        q: eig.map(|l| half * (two_k * l).exp()),
        p: eig.map(|l| half * (-two_k * l).exp()),
    })
}

/// `2πa/N` with `a` reduced modulo `N` first.
#[inline]
fn dft_angle<T: Real>(a: usize, n: usize) -> T {
    T::TAU() * T::lit((a % n) as f64) / T::lit(n as f64)
}

/// Eigenvalues `λ_m`, `m = 0..N_A`, of the circulant adjacency. On even rings
/// the distance-`N_A/2` coefficient appears once per row, so it contributes
/// `c_{N/2} cos(πm)` rather than twice that.
pub fn circulant_eigenvalues<T: Real>(spec: &CirculantGraphSpec<T>) -> Vec<T> {
    let n = spec.n_ancillas();
    let two = T::lit(2.0);
    (0..n)
        .map(|m| {
            let mut lambda = T::zero();
            for l in 1..=((n - 1) / 2) {
                let c = spec.coefficient(l);
                if c != T::zero() {
                    lambda += two * c * dft_angle::<T>(l * m, n).cos();
                }
            }
            if n % 2 == 0 {
                let c = spec.coefficient(n / 2);
                if m % 2 == 0 {
                    lambda += c;
                } else {
                    lambda -= c;
                }
            }
            lambda
        })
        .collect()
}

/// `M_{jℓ} = (1/N) Σ_m cos(2π(j-ℓ)m/N) e^{kλ_m}`; the sine parts cancel
/// because `λ_m = λ_{N-m}`.
pub fn circulant_exponential<T: Real>(spec: &CirculantGraphSpec<T>) -> Matrix<T> {
    let n = spec.n_ancillas();
    let k = spec.strength();
    let weights: Vec<T> = circulant_eigenvalues(spec).into_iter().map(|l| (k * l).exp()).collect();
    let profile = cosine_profile(&weights, n);
    Matrix::from_fn(n, n, |j, l| profile[(j + n - l) % n])
}

/// `(1/N) Σ_m cos(2πdm/N) w_m` for `d = 0..N`.
fn cosine_profile<T: Real>(weights: &[T], n: usize) -> Vec<T> {
    let norm = T::lit(n as f64);
    (0..n)
        .map(|d| {
            weights
                .iter()
                .enumerate()
                .map(|(m, &w)| dft_angle::<T>(d * m, n).cos() * w)
                .sum::<T>()
                / norm
        })
        .collect()
}

/// Local ancilla state `γ_A = diag(Σ e^{2kλ}, Σ e^{-2kλ}) / 2N`.
pub fn circulant_local_cm<T: Real>(spec: &CirculantGraphSpec<T>) -> CovarianceBlock<T> {
    let n = T::lit(spec.n_ancillas() as f64);
    let two_k = spec.strength() * T::lit(2.0);
    let lambdas = circulant_eigenvalues(spec);
    let q: T = lambdas.iter().map(|&l| (two_k * l).exp()).sum();
    let p: T = lambdas.iter().map(|&l| (-two_k * l).exp()).sum();
    CovarianceBlock::diag(q / (n + n), p / (n + n))
}

/// `ζ_d = diag(ζ_d^(q), ζ_d^(p))` for `1 ≤ d ≤ N_A - 1`.
pub fn circulant_correlations<T: Real>(spec: &CirculantGraphSpec<T>, d: usize) -> Result<CovarianceBlock<T>> {
    let n = spec.n_ancillas();
    if d == 0 || d >= n {
        return Err(Error::InvalidParameter(format!("distance {d} outside 1..{n}")));
    }
    Ok(circulant_correlation_profile(spec, d)?[d - 1])
}

/// `[ζ_1, …, ζ_{d_max}]`, sharing one eigenvalue evaluation.
pub fn circulant_correlation_profile<T: Real>(
    spec: &CirculantGraphSpec<T>,
    d_max: usize,
) -> Result<Vec<CovarianceBlock<T>>> {
    let n = spec.n_ancillas();
    if d_max >= n {
        return Err(Error::InvalidParameter(format!("distance {d_max} outside 1..{n}")));
    }
    let two_k = spec.strength() * T::lit(2.0);
    let half = T::lit(0.5);
    let lambdas = circulant_eigenvalues(spec);
    let wq: Vec<T> = lambdas.iter().map(|&l| (two_k * l).exp()).collect();
    let wp: Vec<T> = lambdas.iter().map(|&l| (-two_k * l).exp()).collect();
    let norm = T::lit(n as f64);
    Ok((1..=d_max)
        .map(|d| {
            let (mut q, mut p) = (T::zero(), T::zero());
            for m in 0..n {
                let c = dft_angle::<T>(d * m, n).cos();
                q += c * wq[m];
                p += c * wp[m];
            }
            CovarianceBlock::diag(half * q / norm, half * p / norm)
        })
        .collect())
}

/// Infinite nearest-neighbour ring: `γ_A = I₀(4k)/2 · I₂`, with `I₀` summed
/// from its power series. Requires `|4k| ≤ 30`.
pub fn nn_bessel_limit<T: Real>(k: T) -> Result<CovarianceBlock<T>> {
    if !((T::lit(4.0) * k).abs() <= T::lit(30.0)) {
        return Err(Error::Domain(format!("|4k| = {} exceeds the series guard of 30", (T::lit(4.0) * k).abs())));
    }
    let x2 = (k + k) * (k + k);
    let stop = T::lit(1e-16).max(T::epsilon() * T::lit(0.5));
    let mut term = T::one();
    let mut sum = T::one();
    let mut j = 1usize;
    while term > stop * sum {
        let jj = T::lit(j as f64);
        term = term * x2 / (jj * jj);
        sum += term;
        j += 1;
    }
    Ok(CovarianceBlock::scalar(sum * T::lit(0.5)))
}

/// Leading-order blocks for weak squeezing:
/// `γ_{A_i} ≈ [½ + (G²)_ii k²] I₂` and `ζ_ij ≈ G_ij k · diag(1, -1)`.
pub fn perturbative_blocks<T: Real>(spec: &GaussianGraphSpec<T>) -> Result<GraphCovariances<T>> {
    let g = spec.adjacency();
    let k = spec.strength();
    let g2 = g.matmul(&g)?;
    let n = g.rows();
    let half = T::lit(0.5);
    let local = |i: usize| half + g2[(i, i)] * k * k;
    let q = Matrix::from_fn(n, n, |i, j| if i == j { local(i) } else { g[(i, j)] * k });
    let p = Matrix::from_fn(n, n, |i, j| if i == j { local(i) } else { -g[(i, j)] * k });
    Ok(GraphCovariances { q, p })
}
