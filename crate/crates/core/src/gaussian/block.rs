use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// 2×2 block of quadrature second moments, ordered `(q, p)`.
/// Units have `ħ = 1`, so the vacuum is `I/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CovarianceBlock<T> {
    m: [[T; 2]; 2],
}

impl<T: Real> CovarianceBlock<T> {
    pub const fn new(m: [[T; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn zero() -> Self {
        Self::scalar(T::zero())
    }

    pub fn diag(q: T, p: T) -> Self {
        Self::new([[q, T::zero()], [T::zero(), p]])
    }

    /// `x · I₂`.
    pub fn scalar(x: T) -> Self {
        Self::diag(x, x)
    }

    pub fn vacuum() -> Self {
        Self::scalar(T::lit(0.5))
    }

    /// `(N + 1/2) I₂` for Bose–Einstein occupation `N`.
    pub fn thermal(occupation: T) -> Self {
        Self::scalar(occupation + T::lit(0.5))
    }

    #[inline]
    pub fn entries(&self) -> [[T; 2]; 2] {
        self.m
    }

    pub fn transpose(&self) -> Self {
        Self::new([[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]])
    }

    /// `(ζ + ζᵀ)/2`.
    pub fn symmetrized(&self) -> Self {
        (*self + self.transpose()) * T::lit(0.5)
    }

    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn max_abs(&self) -> T {
        self.m.iter().flatten().fold(T::zero(), |a, &x| a.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn ensure_symmetric(&self) -> Result<()> {
        let asym = (self.m[0][1] - self.m[1][0]).abs();
        if asym > T::tol(1e-12) {
            return Err(Error::NotSymmetric {
                max_asymmetry: asym.as_f64(),
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|x| x.is_finite())
    }
}

impl<T: Real> Add for CovarianceBlock<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.m, rhs.m);
        Self::new([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl<T: Real> Sub for CovarianceBlock<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for CovarianceBlock<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self * (-T::one())
    }
}

impl<T: Real> Mul<T> for CovarianceBlock<T> {
    type Output = Self;

    fn mul(self, x: T) -> Self {
        let a = self.m;
        Self::new([[a[0][0] * x, a[0][1] * x], [a[1][0] * x, a[1][1] * x]])
    }
}

impl<T> Index<(usize, usize)> for CovarianceBlock<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.m[i][j]
    }
}
