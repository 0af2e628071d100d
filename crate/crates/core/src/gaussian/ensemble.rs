use super::block::CovarianceBlock;
use super::graph_state::{circulant_correlation_profile, circulant_local_cm};
use super::physicality::ensure_bona_fide;
use crate::error::{Error, Result};
use crate::graph::CirculantGraphSpec;
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Covariance matrix of the system and `N_A` ancillas, ordered
/// `(q_S, p_S, q_1, p_1, …)`. Block index 0 is the system.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleCM<T> {
    n_ancillas: usize,
    matrix: Matrix<T>,
}

impl<T: Real> EnsembleCM<T> {
    /// Validates shape, symmetry and the bona-fide condition.
    pub fn from_matrix(matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() < 2 || matrix.rows() % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: 2 * (matrix.rows() / 2).max(1),
                actual: matrix.rows(),
            });
        }
        ensure_bona_fide(&matrix)?;
        Ok(Self::from_matrix_unchecked(matrix))
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix<T>) -> Self {
        Self {
            n_ancillas: matrix.rows() / 2 - 1,
            matrix,
        }
    }

    /// System uncorrelated with an arbitrary ancilla covariance matrix.
    pub fn from_parts(gamma_s0: CovarianceBlock<T>, ancillas: &Matrix<T>) -> Result<Self> {
        gamma_s0.ensure_symmetric()?;
        let dim = ancillas.rows() + 2;
        let s = gamma_s0.entries();
        let matrix = Matrix::from_fn(dim, dim, |a, b| match (a < 2, b < 2) {
            (true, true) => s[a][b],
            (false, false) => ancillas[(a - 2, b - 2)],
            _ => T::zero(),
        });
        Self::from_matrix(matrix)
    }

    #[inline]
    pub fn n_ancillas(&self) -> usize {
        self.n_ancillas
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut Matrix<T> {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn block(&self, i: usize, j: usize) -> CovarianceBlock<T> {
        let m = &self.matrix;
        let (a, b) = (2 * i, 2 * j);
        CovarianceBlock::new([[m[(a, b)], m[(a, b + 1)]], [m[(a + 1, b)], m[(a + 1, b + 1)]]])
    }

    pub fn system_block(&self) -> CovarianceBlock<T> {
        self.block(0, 0)
    }

    /// Writes `block` at `(i, j)` and its transpose at `(j, i)`.
    pub(crate) fn set_block(&mut self, i: usize, j: usize, block: CovarianceBlock<T>) {
        let e = block.entries();
        let (a, b) = (2 * i, 2 * j);
        for r in 0..2 {
            for c in 0..2 {
                self.matrix[(a + r, b + c)] = e[r][c];
                self.matrix[(b + c, a + r)] = e[r][c];
            }
        }
    }
}

/// How the ancilla correlations `ζ_d` depend on the distance `d`.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrelationLaw<T> {
    /// `ζ_1, ζ_2, …`, zero beyond the list. Laid out as a plain Toeplitz
    /// matrix, `ζ_{j-i}` at block `(i, j)`.
    Explicit(Vec<CovarianceBlock<T>>),
    /// Only `ζ_1 = ζ`, placed at ring distance one.
    NearestNeighbor(CovarianceBlock<T>),
    /// `ζ_d = K^{1-d} ζ` with `K > 1`, placed by ring distance.
    Algebraic { zeta: CovarianceBlock<T>, decay: T },
    /// Correlations of a Gaussian graph state on a ring.
    FromGraph(CirculantGraphSpec<T>),
}

impl<T: Real> CorrelationLaw<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Explicit(blocks) => {
                if blocks.iter().any(|b| !b.is_finite()) {
                    return Err(Error::InvalidParameter("correlation blocks must be finite".into()));
                }
            }
            Self::NearestNeighbor(zeta) => {
                if !zeta.is_finite() {
                    return Err(Error::InvalidParameter("correlation block must be finite".into()));
                }
            }
            Self::Algebraic { zeta, decay } => {
                if !(*decay > T::one()) || !decay.is_finite() {
                    return Err(Error::InvalidParameter(format!("decay constant K = {decay} must exceed 1")));
                }
                if !zeta.is_finite() {
                    return Err(Error::InvalidParameter("correlation block must be finite".into()));
                }
            }
            Self::FromGraph(_) => {}
        }
        Ok(())
    }

    /// Raw `ζ_d` for `d ≥ 1`, without symmetrisation.
    fn raw(&self, d: usize) -> CovarianceBlock<T> {
        match self {
            Self::Explicit(blocks) => blocks.get(d.wrapping_sub(1)).copied().unwrap_or_else(CovarianceBlock::zero),
            Self::NearestNeighbor(zeta) if d == 1 => *zeta,
            Self::NearestNeighbor(_) => CovarianceBlock::zero(),
            Self::Algebraic { zeta, decay } => *zeta * decay.powi(1 - d as i32),
            Self::FromGraph(_) => unreachable!("graph correlations are tabulated"),
        }
    }

    /// `[sym ζ_1, …, sym ζ_len]` in collision-order distance, with
    /// `sym ζ = (ζ + ζᵀ)/2`. Graph correlations vanish for `d ≥ N_A`.
    pub fn table(&self, len: usize) -> Result<Vec<CovarianceBlock<T>>> {
        self.validate()?;
        if let Self::FromGraph(spec) = self {
            let n = spec.n_ancillas();
            let avail = len.min(n.saturating_sub(1));
            let mut out = if avail > 0 {
                circulant_correlation_profile(spec, avail)?
            } else {
                Vec::new()
            };
            out.resize(len, CovarianceBlock::zero());
            return Ok(out);
        }
        Ok((1..=len).map(|d| self.raw(d).symmetrized()).collect())
    }

    /// `ζ_d` for a single distance; see [`table`](Self::table).
    pub fn zeta(&self, d: usize) -> Result<CovarianceBlock<T>> {
        if d == 0 {
            return Err(Error::InvalidParameter("correlation distance starts at 1".into()));
        }
        Ok(self.table(d)?[d - 1])
    }

    /// Block `(i, j)` with `1 ≤ i < j ≤ n_ancillas` of the ancilla covariance
    /// matrix. Laws other than `Explicit` are placed by ring distance; a pair
    /// wrapping around the ring sees the transposed block.
    fn ring_layout(&self, n_ancillas: usize, gap: usize) -> CovarianceBlock<T> {
        match self {
            Self::Explicit(_) => self.raw(gap),
            _ if gap <= n_ancillas - gap => self.raw(gap),
            _ => self.raw(n_ancillas - gap).transpose(),
        }
    }

    /// The same ancilla layout as an `Explicit` law with `N_A - 1` entries,
    /// so collision-order formulas see exactly the blocks that
    /// [`build_ensemble_cm`] writes, wrap-around included.
    pub fn on_ring(&self, n_ancillas: usize) -> Result<Self> {
        self.validate()?;
        if let Self::FromGraph(spec) = self {
            self.check_graph(spec, n_ancillas)?;
            return Ok(Self::Explicit(self.table(n_ancillas.saturating_sub(1))?));
        }
        Ok(Self::Explicit(
            (1..n_ancillas).map(|gap| self.ring_layout(n_ancillas, gap)).collect(),
        ))
    }

    /// Largest distance with a possibly nonzero `ζ_d`, `None` if unbounded.
    pub fn support(&self) -> Option<usize> {
        match self {
            Self::Explicit(blocks) => Some(blocks.iter().rposition(|b| b.max_abs() != T::zero()).map_or(0, |i| i + 1)),
            Self::NearestNeighbor(_) => Some(1),
            Self::Algebraic { .. } => None,
            Self::FromGraph(spec) => Some(spec.n_ancillas().saturating_sub(1)),
        }
    }

    /// Local ancilla state implied by the law, if it implies one.
    pub fn local_state(&self) -> Option<CovarianceBlock<T>> {
        match self {
            Self::FromGraph(spec) => Some(circulant_local_cm(spec)),
            _ => None,
        }
    }

    fn check_graph(&self, spec: &CirculantGraphSpec<T>, n_ancillas: usize) -> Result<()> {
        if spec.n_ancillas() != n_ancillas {
            return Err(Error::InvalidParameter(format!(
                "graph has {} sites but the ensemble has {n_ancillas} ancillas",
                spec.n_ancillas()
            )));
        }
        Ok(())
    }
}

/// Initial ensemble: system block `γ_S^0`, uncorrelated with a Toeplitz
/// ancilla sector with local blocks `γ_A` and correlations from `law`.
pub fn build_ensemble_cm<T: Real>(
    gamma_s0: CovarianceBlock<T>,
    gamma_a: CovarianceBlock<T>,
    law: &CorrelationLaw<T>,
    n_ancillas: usize,
) -> Result<EnsembleCM<T>> {
    if n_ancillas == 0 {
        return Err(Error::InvalidParameter("at least one ancilla required".into()));
    }
    gamma_s0.ensure_symmetric()?;
    gamma_a.ensure_symmetric()?;
    law.validate()?;
    if let CorrelationLaw::Explicit(blocks) = law {
        if blocks.len() >= n_ancillas && blocks[n_ancillas - 1..].iter().any(|b| b.max_abs() != T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "{} correlation blocks given for {n_ancillas} ancillas",
                blocks.len()
            )));
        }
    }

    let mut ensemble = EnsembleCM::from_matrix_unchecked(Matrix::zeros(2 * n_ancillas + 2, 2 * n_ancillas + 2));
    ensemble.set_block(0, 0, gamma_s0);
    for i in 1..=n_ancillas {
        ensemble.set_block(i, i, gamma_a);
    }

    let by_gap: Vec<CovarianceBlock<T>> = match law {
        CorrelationLaw::FromGraph(spec) => {
            law.check_graph(spec, n_ancillas)?;
            let local = circulant_local_cm(spec);
            let tol = T::tol(1e-10) * local.max_abs().max(T::one());
            if local.max_abs_diff(&gamma_a) > tol {
                return Err(Error::InvalidParameter(
                    "gamma_A differs from the local state of the graph".into(),
                ));
            }
            if n_ancillas > 1 {
                circulant_correlation_profile(spec, n_ancillas - 1)?
            } else {
                Vec::new()
            }
        }
        _ => (1..n_ancillas).map(|gap| law.ring_layout(n_ancillas, gap)).collect(),
    };
    for i in 1..=n_ancillas {
        for j in (i + 1)..=n_ancillas {
            let zeta = by_gap[j - i - 1];
            if zeta.max_abs() != T::zero() {
                ensemble.set_block(i, j, zeta);
            }
        }
    }
    ensure_bona_fide(ensemble.matrix())?;
    Ok(ensemble)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::graph_state::graph_cm_general;

    #[test]
    fn uncorrelated_is_block_diagonal() {
        let e = build_ensemble_cm(
            CovarianceBlock::thermal(1.0f64),
            CovarianceBlock::vacuum(),
            &CorrelationLaw::Explicit(vec![CovarianceBlock::zero(); 3]),
            5,
        )
        .unwrap();
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert_eq!(e.block(i, j).max_abs(), 0.0);
                }
            }
        }
        assert_eq!(e.system_block(), CovarianceBlock::scalar(1.5));
    }

    #[test]
    fn nearest_neighbor_wraps_on_small_ring() {
        let zeta = CovarianceBlock::new([[0.1, 0.02], [0.0, -0.1]]);
        let e = build_ensemble_cm(
            CovarianceBlock::vacuum(),
            CovarianceBlock::scalar(1.0f64),
            &CorrelationLaw::NearestNeighbor(zeta),
            3,
        )
        .unwrap();
        assert_eq!(e.block(1, 2), zeta);
        assert_eq!(e.block(2, 3), zeta);
        assert_eq!(e.block(1, 3), zeta.transpose());
        assert_eq!(e.block(3, 1), zeta);
        assert_eq!(e.block(0, 2).max_abs(), 0.0);
    }

    #[test]
    fn on_ring_reproduces_layout() {
        let law = CorrelationLaw::Algebraic {
            zeta: CovarianceBlock::diag(0.05f64, -0.05),
            decay: 2.0,
        };
        let n = 7;
        let a = build_ensemble_cm(CovarianceBlock::vacuum(), CovarianceBlock::scalar(1.0), &law, n).unwrap();
        let b = build_ensemble_cm(CovarianceBlock::vacuum(), CovarianceBlock::scalar(1.0), &law.on_ring(n).unwrap(), n)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn graph_law_matches_general_construction() {
        let spec = CirculantGraphSpec::nearest_neighbors(100, 1, 0.7).unwrap();
        let law = CorrelationLaw::FromGraph(spec.clone());
        let gamma_a = law.local_state().unwrap();
        let e = build_ensemble_cm(CovarianceBlock::vacuum(), gamma_a, &law, 100).unwrap();
        let general = graph_cm_general(&spec.into()).unwrap();
        for i in 0..100 {
            assert!(e.block(i + 1, i + 1).max_abs_diff(&general.local(i)) < 1e-10);
            for j in 0..100 {
                assert!(e.block(i + 1, j + 1).max_abs_diff(&general.correlation(i, j)) < 1e-10 || i == j);
            }
        }
        let wrong = build_ensemble_cm(CovarianceBlock::vacuum(), CovarianceBlock::vacuum(), &law, 100);
        assert!(matches!(wrong, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn nonphysical_is_rejected() {
        let err = build_ensemble_cm(
            CovarianceBlock::vacuum(),
            CovarianceBlock::vacuum(),
            &CorrelationLaw::NearestNeighbor(CovarianceBlock::scalar(0.3f64)),
            6,
        )
        .unwrap_err();
        match err {
            Error::Nonphysical { min_eigenvalue } => assert!(min_eigenvalue < -0.1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn algebraic_needs_decay_above_one() {
        let law = CorrelationLaw::Algebraic {
            zeta: CovarianceBlock::scalar(0.1f64),
            decay: 1.0,
        };
        assert!(law.validate().is_err());
        assert!(law.table(3).is_err());
    }

    #[test]
    fn table_symmetrises() {
        let law = CorrelationLaw::Explicit(vec![CovarianceBlock::new([[0.0f64, 0.2], [0.0, 0.0]])]);
        assert_eq!(law.table(2).unwrap(), vec![CovarianceBlock::new([[0.0, 0.1], [0.1, 0.0]]), CovarianceBlock::zero()]);
        assert_eq!(law.support(), Some(1));
    }
}
