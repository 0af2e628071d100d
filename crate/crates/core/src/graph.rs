//! Symmetric circulant (cyclic) graphs used to build translationally
//! invariant ancilla states.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Ring of `n_ancillas` sites where sites at ring distance `ℓ` couple with
/// weight `coeffs[ℓ - 1]`, scaled overall by `strength`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantGraphSpec<T> {
    n_ancillas: usize,
    coeffs: Vec<T>,
    strength: T,
}

impl<T: Real> CirculantGraphSpec<T> {
    /// `coeffs` may be shorter than `⌊N_A/2⌋` (missing entries are zero) but
    /// not longer.
    pub fn new(n_ancillas: usize, coeffs: Vec<T>, strength: T) -> Result<Self> {
        if n_ancillas == 0 {
            return Err(Error::InvalidParameter("ring needs at least one site".into()));
        }
        let max = n_ancillas / 2;
        if coeffs.len() > max {
            return Err(Error::TooManyCoefficients {
                count: coeffs.len(),
                n_ancillas,
                max,
            });
        }
        if !strength.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("graph coefficients must be finite".into()));
        }
        Ok(Self {
            n_ancillas,
            coeffs,
            strength,
        })
    }

    /// `c_1 = … = c_order = 1`, capped at the ring's largest distance.
    pub fn nearest_neighbors(n_ancillas: usize, order: usize, strength: T) -> Result<Self> {
        let len = order.min(n_ancillas / 2);
        Self::new(n_ancillas, vec![T::one(); len], strength)
    }

    #[inline]
    pub fn n_ancillas(&self) -> usize {
        self.n_ancillas
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    #[inline]
    pub fn strength(&self) -> T {
        self.strength
    }

    pub fn with_strength(&self, strength: T) -> Self {
        Self {
            strength,
            ..self.clone()
        }
    }

    /// `min(|i - j|, N_A - |i - j|)`.
    #[inline]
    pub fn ring_distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j) % self.n_ancillas;
        d.min(self.n_ancillas - d)
    }

    /// `c_ℓ` for ring distance `ℓ ≥ 1`, zero beyond the given list.
    #[inline]
    pub fn coefficient(&self, distance: usize) -> T {
        if distance == 0 {
            return T::zero();
        }
        self.coeffs.get(distance - 1).copied().unwrap_or_else(T::zero)
    }

    /// Adjacency matrix `G` (without the strength factor).
    pub fn adjacency(&self) -> Matrix<T> {
        let n = self.n_ancillas;
        Matrix::from_fn(n, n, |i, j| self.coefficient(self.ring_distance(i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_of_four() {
        let g = CirculantGraphSpec::new(4, vec![1.0], 0.7).unwrap().adjacency();
        let expect = [[0., 1., 0., 1.], [1., 0., 1., 0.], [0., 1., 0., 1.], [1., 0., 1., 0.]];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g[(i, j)], expect[i][j]);
            }
        }
    }

    #[test]
    fn six_site_pattern() {
        let (c1, c2, c3) = (1.0, 2.0, 3.0);
        let g = CirculantGraphSpec::new(6, vec![c1, c2, c3], 1.0).unwrap().adjacency();
        let first = [0.0, c1, c2, c3, c2, c1];
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g[(i, j)], first[(j + 6 - i) % 6]);
            }
        }
        assert_eq!(g.max_asymmetry(), 0.0);
    }

    #[test]
    fn empty_coefficients_give_zero_matrix() {
        let g = CirculantGraphSpec::<f64>::new(5, vec![], 1.0).unwrap().adjacency();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn too_many_coefficients() {
        assert_eq!(
            CirculantGraphSpec::new(5, vec![1.0, 1.0, 1.0], 1.0),
            Err(Error::TooManyCoefficients { count: 3, n_ancillas: 5, max: 2 })
        );
    }

    #[test]
    fn odd_ring_distance_wraps() {
        let s = CirculantGraphSpec::new(7, vec![1.0, 0.5, 0.25], 1.0).unwrap();
        assert_eq!(s.ring_distance(0, 6), 1);
        assert_eq!(s.ring_distance(1, 5), 3);
        assert_eq!(s.adjacency()[(0, 4)], 0.25);
    }
}
