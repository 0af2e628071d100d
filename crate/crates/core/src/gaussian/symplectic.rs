use super::block::CovarianceBlock;
use super::ensemble::EnsembleCM;
use super::physicality::symplectic_form;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Beam splitter between the system and ancilla `target`, acting as
/// `R_S → cR_S + sR_t`, `R_t → -sR_S + cR_t` on both quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter<T> {
    tau: T,
    target: usize,
    n_ancillas: usize,
}

impl<T: Real> BeamSplitter<T> {
    pub fn new(tau: T, target: usize, n_ancillas: usize) -> Result<Self> {
        if target == 0 || target > n_ancillas {
            return Err(Error::InvalidParameter(format!(
                "beam-splitter target {target} outside 1..={n_ancillas}"
            )));
        }
        if !tau.is_finite() {
            return Err(Error::InvalidParameter("tau must be finite".into()));
        }
        Ok(Self {
            tau,
            target,
            n_ancillas,
        })
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        let dim = 2 * self.n_ancillas + 2;
        let (c, s) = (self.tau.cos(), self.tau.sin());
        let mut m = Matrix::identity(dim);
        let t = 2 * self.target;
        for q in 0..2 {
            m[(q, q)] = c;
            m[(q, t + q)] = s;
            m[(t + q, q)] = -s;
            m[(t + q, t + q)] = c;
        }
        m
    }
}

/// Dense `2(N_A+1) × 2(N_A+1)` matrix of [`BeamSplitter`].
pub fn beam_splitter_symplectic<T: Real>(tau: T, target: usize, n_ancillas: usize) -> Result<Matrix<T>> {
    Ok(BeamSplitter::new(tau, target, n_ancillas)?.to_matrix())
}

/// A linear canonical transformation acting on covariance matrices.
pub trait SymplecticAction<T: Real> {
    fn dim(&self) -> usize;

    /// Replaces `γ` by `SγSᵀ`. The dimension has already been checked.
    fn act(&self, gamma: &mut Matrix<T>) -> Result<()>;
}

impl<T: Real> SymplecticAction<T> for Matrix<T> {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn act(&self, gamma: &mut Matrix<T>) -> Result<()> {
        *gamma = self.matmul(gamma)?.matmul(&self.transpose())?;
        Ok(())
    }
}

impl<T: Real> SymplecticAction<T> for BeamSplitter<T> {
    fn dim(&self) -> usize {
        2 * self.n_ancillas + 2
    }

    /// Only rows and columns of the two modes change, so this is `O(N_A)`.
    /// Each updated entry is written to both triangles, keeping `γ`
    /// exactly symmetric.
    fn act(&self, gamma: &mut Matrix<T>) -> Result<()> {
        let dim = self.dim();
        let (c, s) = (self.tau.cos(), self.tau.sin());
        let t = 2 * self.target;
        for col in (2..dim).filter(|&col| col != t && col != t + 1) {
            for q in 0..2 {
                let (x, y) = (gamma[(q, col)], gamma[(t + q, col)]);
                let (nx, ny) = (c * x + s * y, c * y - s * x);
                gamma[(q, col)] = nx;
                gamma[(col, q)] = nx;
                gamma[(t + q, col)] = ny;
                gamma[(col, t + q)] = ny;
            }
        }
        // 4×4 block of the two modes: R B Rᵀ with R = [[cI, sI], [-sI, cI]]
        let idx = [0, 1, t, t + 1];
        let b: [[T; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| gamma[(idx[i], idx[j])]));
        let r = |i: usize, k: usize| -> T {
            match (i / 2, k / 2, i % 2 == k % 2) {
                (_, _, false) => T::zero(),
                (0, 0, _) | (1, 1, _) => c,
                (0, 1, _) => s,
                _ => -s,
            }
        };
        let mut rb = [[T::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rb[i][j] = (0..4).map(|k| r(i, k) * b[k][j]).sum();
            }
        }
        for i in 0..4 {
            for j in i..4 {
                let x: T = (0..4).map(|k| rb[i][k] * r(j, k)).sum();
                let y: T = (0..4).map(|k| rb[j][k] * r(i, k)).sum();
                let v = (x + y) * T::lit(0.5);
                gamma[(idx[i], idx[j])] = v;
                gamma[(idx[j], idx[i])] = v;
            }
        }
        Ok(())
    }
}

/// `max |SᵀΩS - Ω|`.
pub fn symplectic_deviation<T: Real>(s: &Matrix<T>) -> Result<T> {
    if !s.is_square() || s.rows() % 2 != 0 {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let omega = symplectic_form::<T>(s.rows() / 2);
    Ok(s.transpose().matmul(&omega)?.matmul(s)?.max_abs_diff(&omega))
}

/// `SγSᵀ`.
pub fn step_covariance<T: Real>(gamma: &EnsembleCM<T>, s: &impl SymplecticAction<T>) -> Result<EnsembleCM<T>> {
    let mut out = gamma.clone();
    collide(&mut out, s)?;
    Ok(out)
}

/// In-place [`step_covariance`].
pub fn collide<T: Real>(gamma: &mut EnsembleCM<T>, s: &impl SymplecticAction<T>) -> Result<()> {
    let dim = gamma.matrix().rows();
    if s.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: s.dim(),
        });
    }
    s.act(gamma.matrix_mut())
}

/// System block after each of the first `n` collisions, starting with the
/// initial block, so the result has `n + 1` entries.
pub fn simulate_system_trajectory<T: Real>(
    initial: &EnsembleCM<T>,
    tau: T,
    n: usize,
) -> Result<Vec<CovarianceBlock<T>>> {
    let n_a = initial.n_ancillas();
    if n > n_a {
        return Err(Error::InvalidParameter(format!("{n} collisions requested with {n_a} ancillas")));
    }
    let mut gamma = initial.clone();
    let mut out = Vec::with_capacity(n + 1);
    out.push(gamma.system_block());
    for step in 1..=n {
        collide(&mut gamma, &BeamSplitter::new(tau, step, n_a)?)?;
        out.push(gamma.system_block());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::ensemble::{build_ensemble_cm, CorrelationLaw};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn layout_for_second_ancilla() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let m = beam_splitter_symplectic(0.3, 2, 5).unwrap();
        assert_eq!(m.rows(), 12);
        for q in 0..2 {
            assert_eq!(m[(q, q)], c);
            assert_eq!(m[(q, 4 + q)], s);
            assert_eq!(m[(4 + q, q)], -s);
            assert_eq!(m[(4 + q, 4 + q)], c);
            assert_eq!(m[(2 + q, 2 + q)], 1.0);
        }
        assert_eq!(m[(0, 1)], 0.0);
        assert!(symplectic_deviation(&m).unwrap() < 1e-12);
        assert_eq!(beam_splitter_symplectic(0.0f64, 1, 3).unwrap(), Matrix::identity(8));
        assert!(beam_splitter_symplectic(0.3f64, 6, 5).is_err());
        assert!(beam_splitter_symplectic(0.3f64, 0, 5).is_err());
    }

    #[test]
    fn structured_matches_dense() {
        let law = CorrelationLaw::NearestNeighbor(CovarianceBlock::new([[0.1, 0.03], [0.01, -0.08]]));
        let e = build_ensemble_cm(CovarianceBlock::thermal(0.7f64), CovarianceBlock::scalar(1.2), &law, 6).unwrap();
        let bs = BeamSplitter::new(0.8, 4, 6).unwrap();
        let fast = step_covariance(&e, &bs).unwrap();
        let dense = step_covariance(&e, &bs.to_matrix()).unwrap();
        assert!(fast.matrix().max_abs_diff(dense.matrix()) < 1e-14);
    }

    #[test]
    fn thermal_system_vacuum_ancilla() {
        let e = build_ensemble_cm(
            CovarianceBlock::thermal(2.0f64),
            CovarianceBlock::vacuum(),
            &CorrelationLaw::Explicit(vec![]),
            1,
        )
        .unwrap();
        let out = step_covariance(&e, &BeamSplitter::new(0.5, 1, 1).unwrap()).unwrap();
        let (c, s) = (0.5f64.cos(), 0.5f64.sin());
        let expect = CovarianceBlock::scalar(2.5) * (c * c) + CovarianceBlock::vacuum() * (s * s);
        assert!(out.system_block().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn full_swap_exchanges_blocks() {
        let e = build_ensemble_cm(
            CovarianceBlock::diag(3.0f64, 0.5),
            CovarianceBlock::diag(0.7, 1.1),
            &CorrelationLaw::Explicit(vec![]),
            2,
        )
        .unwrap();
        let out = step_covariance(&e, &BeamSplitter::new(FRAC_PI_2, 2, 2).unwrap()).unwrap();
        assert!(out.system_block().max_abs_diff(&CovarianceBlock::diag(0.7, 1.1)) < 1e-15);
        assert!(out.block(2, 2).max_abs_diff(&CovarianceBlock::diag(3.0, 0.5)) < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let e = build_ensemble_cm(CovarianceBlock::vacuum(), CovarianceBlock::vacuum(), &CorrelationLaw::Explicit(vec![]), 3)
            .unwrap();
        let other = BeamSplitter::new(0.3f64, 1, 4).unwrap();
        assert!(matches!(step_covariance(&e, &other), Err(Error::DimensionMismatch { .. })));
    }
}
