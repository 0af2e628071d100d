//! Closed-form system covariance after `n` collisions.
//!
//! Negative powers of `c` are never formed: `c^{2m} c^{-d}` is evaluated as
//! `c^{2m-d}` with `d ≤ m`, so everything stays finite at `c = 0`.

use super::block::CovarianceBlock;
use super::ensemble::{CorrelationLaw, EnsembleCM};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_local<T: Real>(gamma_a: &CovarianceBlock<T>, law: &CorrelationLaw<T>) -> Result<()> {
    gamma_a.ensure_symmetric()?;
    if let Some(local) = law.local_state() {
        let tol = T::tol(1e-10) * local.max_abs().max(T::one());
        if local.max_abs_diff(gamma_a) > tol {
            return Err(Error::InvalidParameter("gamma_A differs from the local state of the graph".into()));
        }
    }
    Ok(())
}

/// `c^{2n}γ_S^0 + (1 - c^{2n})γ_A`.
pub fn mixture<T: Real>(n: usize, gamma_s0: CovarianceBlock<T>, gamma_a: CovarianceBlock<T>, tau: T) -> CovarianceBlock<T> {
    let w = tau.cos().powi(2 * n as i32);
    gamma_s0 * w + gamma_a * (T::one() - w)
}

/// `2s² Σ_{m=1}^{n-1} Σ_{d=1}^{m} c^{2m-d} ζ_d`.
fn correlation_sum<T: Real>(n: usize, zetas: &[CovarianceBlock<T>], tau: T) -> CovarianceBlock<T> {
    let (c, s) = (tau.cos(), tau.sin());
    let c2 = c * c;
    let mut acc = CovarianceBlock::zero();
    for (idx, zeta) in zetas.iter().enumerate().take(n.saturating_sub(1)) {
        let d = idx + 1;
        // Σ_{m=d}^{n-1} c^{2m-d}
        let mut p = c.powi(d as i32);
        let mut weight = T::zero();
        for _ in d..n {
            weight += p;
            p *= c2;
        }
        acc = acc + *zeta * weight;
    }
    acc * (T::lit(2.0) * s * s)
}

/// Homogenisation gap `Δγ_S^n`, the correlation-induced part of the closed
/// form. Zero at `n = 1`.
pub fn homogenization_gap<T: Real>(n: usize, law: &CorrelationLaw<T>, tau: T) -> Result<CovarianceBlock<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("the gap is defined for n >= 1".into()));
    }
    let zetas = law.table(n - 1)?;
    Ok(correlation_sum(n, &zetas, tau))
}

/// System block after `n` collisions with a translation-invariant ancilla
/// chain, with `ζ_d` taken in collision order from `law`.
pub fn closed_form_cm<T: Real>(
    n: usize,
    gamma_s0: CovarianceBlock<T>,
    gamma_a: CovarianceBlock<T>,
    law: &CorrelationLaw<T>,
    tau: T,
) -> Result<CovarianceBlock<T>> {
    gamma_s0.ensure_symmetric()?;
    check_local(&gamma_a, law)?;
    if n == 0 {
        law.validate()?;
        return Ok(gamma_s0);
    }
    Ok(mixture(n, gamma_s0, gamma_a, tau) + homogenization_gap(n, law, tau)?)
}

/// System block after `n` collisions for arbitrary ancilla blocks read from
/// `ensemble`:
/// `c^{2n}γ_S^0 + s² Σ_j c^{2(n-j)} γ_{A_j} + 2s² Σ_{j<ℓ≤n} c^{2n-j-ℓ} ζ_{j,ℓ}`.
pub fn general_solution_cm<T: Real>(ensemble: &EnsembleCM<T>, tau: T, n: usize) -> Result<CovarianceBlock<T>> {
    if n > ensemble.n_ancillas() {
        return Err(Error::InvalidParameter(format!(
            "{n} collisions requested with {} ancillas",
            ensemble.n_ancillas()
        )));
    }
    let (c, s) = (tau.cos(), tau.sin());
    let s2 = s * s;
    let pow = |e: usize| c.powi(e as i32);
    let mut acc = ensemble.system_block() * pow(2 * n);
    for j in 1..=n {
        acc = acc + ensemble.block(j, j) * (pow(2 * (n - j)) * s2);
        for l in (j + 1)..=n {
            acc = acc + ensemble.block(j, l).symmetrized() * (T::lit(2.0) * s2 * pow(2 * n - j - l));
        }
    }
    Ok(acc)
}

/// Nearest-neighbour closed form
/// `c^{2n}γ_S^0 + (1 - c^{2n})γ_A + 2c(1 - c^{2(n-1)})ζ`.
pub fn nn_closed_form<T: Real>(
    n: usize,
    gamma_s0: CovarianceBlock<T>,
    gamma_a: CovarianceBlock<T>,
    zeta: CovarianceBlock<T>,
    tau: T,
) -> CovarianceBlock<T> {
    if n == 0 {
        return gamma_s0;
    }
    let c = tau.cos();
    let corr = T::lit(2.0) * c * (T::one() - c.powi(2 * (n as i32 - 1)));
    mixture(n, gamma_s0, gamma_a, tau) + zeta.symmetrized() * corr
}

fn ensure_proper_collision<T: Real>(c: T) -> Result<()> {
    let eps = T::tol(1e-12);
    if c.abs() < eps || (T::one() - c.abs()).abs() < eps {
        return Err(Error::Domain(format!(
            "the nearest-neighbour steady state needs 0 < |cos tau| < 1, got cos tau = {c}"
        )));
    }
    Ok(())
}

fn ensure_contracting<T: Real>(c: T) -> Result<()> {
    if !(T::one() - c.abs() >= T::tol(1e-12)) {
        return Err(Error::Domain(format!("a steady state needs |cos tau| < 1, got cos tau = {c}")));
    }
    Ok(())
}

/// `γ_A + 2cζ`.
pub fn nn_steady_state<T: Real>(gamma_a: CovarianceBlock<T>, zeta: CovarianceBlock<T>, tau: T) -> Result<CovarianceBlock<T>> {
    let c = tau.cos();
    ensure_proper_collision(c)?;
    Ok(gamma_a + zeta.symmetrized() * (T::lit(2.0) * c))
}

fn check_decay<T: Real>(decay: T) -> Result<()> {
    if !(decay > T::one()) || !decay.is_finite() {
        return Err(Error::InvalidParameter(format!("decay constant K = {decay} must exceed 1")));
    }
    Ok(())
}

/// Closed form for `ζ_d = K^{1-d}ζ`:
/// `mixture + (2K/(cK-1)) [c² - c^{2n} - s²c (c^{n-1}K^{1-n} - 1)/(c - K)] ζ`,
/// an exact rearrangement that avoids dividing by `s` or `c`. Close to the
/// removable singularity `cK = 1` the direct double sum is used instead.
pub fn algebraic_closed_form<T: Real>(
    n: usize,
    gamma_s0: CovarianceBlock<T>,
    gamma_a: CovarianceBlock<T>,
    zeta: CovarianceBlock<T>,
    decay: T,
    tau: T,
) -> Result<CovarianceBlock<T>> {
    check_decay(decay)?;
    if n == 0 {
        return Ok(gamma_s0);
    }
    let zeta = zeta.symmetrized();
    let (c, s) = (tau.cos(), tau.sin());
    let k = decay;
    let denom = c * k - T::one();
    if denom.abs() < T::lit(1e-4) {
        let law = CorrelationLaw::Algebraic { zeta, decay };
        return closed_form_cm(n, gamma_s0, gamma_a, &law, tau);
    }
    let n_i = n as i32;
    let tail = c.powi(n_i - 1) * k.powi(1 - n_i) - T::one();
    let bracket = c * c - c.powi(2 * n_i) - s * s * c * tail / (c - k);
    let factor = T::lit(2.0) * k / denom * bracket;
    Ok(mixture(n, gamma_s0, gamma_a, tau) + zeta * factor)
}

/// `2cK/(K - c)`.
pub fn steady_state_prefactor<T: Real>(tau: T, decay: T) -> Result<T> {
    check_decay(decay)?;
    let c = tau.cos();
    Ok(T::lit(2.0) * c * decay / (decay - c))
}

/// `γ_A + [2cK/(K - c)]ζ`.
pub fn algebraic_steady_state<T: Real>(
    gamma_a: CovarianceBlock<T>,
    zeta: CovarianceBlock<T>,
    decay: T,
    tau: T,
) -> Result<CovarianceBlock<T>> {
    ensure_contracting(tau.cos())?;
    Ok(gamma_a + zeta.symmetrized() * steady_state_prefactor(tau, decay)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState<T> {
    pub block: CovarianceBlock<T>,
    /// Bound on the omitted terms `2 Σ_{d > d_max} c^d ζ_d`, assuming
    /// `‖ζ_d‖` does not grow past `d_max`.
    pub tail_estimate: T,
    /// Set when the omitted terms are not negligible.
    pub truncation_warning: bool,
}

/// `γ_A + 2 Σ_{d=1}^{d_max} c^d ζ_d`, the `n → ∞` limit of the closed form
/// obtained by summing over `m` first.
pub fn general_steady_state<T: Real>(
    gamma_a: CovarianceBlock<T>,
    law: &CorrelationLaw<T>,
    tau: T,
    d_max: usize,
) -> Result<SteadyState<T>> {
    let c = tau.cos();
    ensure_contracting(c)?;
    check_local(&gamma_a, law)?;
    let two = T::lit(2.0);
    let zetas = law.table(d_max + 1)?;
    let mut block = gamma_a;
    let mut p = T::one();
    for zeta in &zetas[..d_max] {
        p *= c;
        block = block + *zeta * (two * p);
    }
    let exhausted = law.support().is_some_and(|s| s <= d_max);
    let tail_estimate = if exhausted {
        T::zero()
    } else {
        two * (p * c).abs() * zetas[d_max].max_abs() / (T::one() - c.abs())
    };
    let truncation_warning = tail_estimate > T::tol(1e-10) * block.max_abs().max(T::one());
    Ok(SteadyState {
        block,
        tail_estimate,
        truncation_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn blocks() -> (CovarianceBlock<f64>, CovarianceBlock<f64>, CovarianceBlock<f64>) {
        (CovarianceBlock::scalar(1.5), CovarianceBlock::vacuum(), CovarianceBlock::scalar(0.1))
    }

    #[test]
    fn trivial_limits() {
        let (s0, a, z) = blocks();
        let law = CorrelationLaw::NearestNeighbor(z);
        assert_eq!(closed_form_cm(0, s0, a, &law, 0.5).unwrap(), s0);
        assert_eq!(homogenization_gap(1, &law, 0.5).unwrap(), CovarianceBlock::zero());
        assert!(homogenization_gap(0, &law, 0.5).is_err());
        let none = CorrelationLaw::Explicit(vec![]);
        for n in 1..10 {
            assert_eq!(closed_form_cm(n, s0, a, &none, 0.5).unwrap(), mixture(n, s0, a, 0.5));
        }
    }

    #[test]
    fn nearest_neighbor_agrees_with_double_sum() {
        let (s0, a, z) = blocks();
        let law = CorrelationLaw::NearestNeighbor(z);
        let double = closed_form_cm(5, s0, a, &law, 0.5).unwrap();
        assert!(double.max_abs_diff(&nn_closed_form(5, s0, a, z, 0.5)) < 1e-14);
        let (c, s) = (0.5f64.cos(), 0.5f64.sin());
        let one = nn_closed_form(1, s0, a, z, 0.5);
        assert!(one.max_abs_diff(&(s0 * (c * c) + a * (s * s))) < 1e-15);
    }

    #[test]
    fn nn_steady_state_values() {
        let g = nn_steady_state(CovarianceBlock::thermal(1.0), CovarianceBlock::diag(0.1, -0.1), 0.5f64.acos()).unwrap();
        assert!(g.max_abs_diff(&CovarianceBlock::diag(1.6, 1.4)) < 1e-14);
        assert!(matches!(nn_steady_state(CovarianceBlock::vacuum(), CovarianceBlock::zero(), 0.0f64), Err(Error::Domain(_))));
        assert!(matches!(
            nn_steady_state(CovarianceBlock::vacuum(), CovarianceBlock::zero(), FRAC_PI_2),
            Err(Error::Domain(_))
        ));
        let late = nn_closed_form(400, CovarianceBlock::scalar(1.5), CovarianceBlock::vacuum(), CovarianceBlock::scalar(0.1), 0.5);
        assert!(late.max_abs_diff(&(CovarianceBlock::vacuum() + CovarianceBlock::scalar(0.2 * 0.5f64.cos()))) < 1e-14);
    }

    #[test]
    fn algebraic_matches_truncated_sum() {
        let (s0, a, z) = blocks();
        let alg = algebraic_closed_form(8, s0, a, z, 1.5, 0.7).unwrap();
        let zs: Vec<_> = (1..=8).map(|d| z * 1.5f64.powi(1 - d)).collect();
        let sum = closed_form_cm(8, s0, a, &CorrelationLaw::Explicit(zs), 0.7).unwrap();
        assert!(alg.max_abs_diff(&sum) < 1e-12);
    }

    #[test]
    fn algebraic_near_singularity() {
        let (s0, a, z) = blocks();
        let k = 1.0 / 0.7f64.cos();
        for dk in [0.0, 2e-5, -2e-5, 3e-4] {
            let alg = algebraic_closed_form(12, s0, a, z, k + dk, 0.7).unwrap();
            let direct = closed_form_cm(12, s0, a, &CorrelationLaw::Algebraic { zeta: z, decay: k + dk }, 0.7).unwrap();
            assert!(alg.max_abs_diff(&direct) < 1e-10, "dk = {dk}");
        }
    }

    #[test]
    fn algebraic_large_decay_is_nearest_neighbor() {
        let (s0, a, z) = blocks();
        for n in [1, 2, 5, 30] {
            let alg = algebraic_closed_form(n, s0, a, z, 1e12, 0.6).unwrap();
            assert!(alg.max_abs_diff(&nn_closed_form(n, s0, a, z, 0.6)) < 1e-10);
        }
        assert!(algebraic_closed_form(3, s0, a, z, 1.0, 0.6).is_err());
    }

    #[test]
    fn prefactor_vanishes_at_full_swap() {
        assert!(steady_state_prefactor(FRAC_PI_2, 1.5f64).unwrap().abs() < 1e-15);
        assert!(steady_state_prefactor(0.3, 0.5f64).is_err());
    }

    #[test]
    fn general_steady_state_resums() {
        let z = CovarianceBlock::diag(0.1, -0.1);
        let nn = general_steady_state(CovarianceBlock::vacuum(), &CorrelationLaw::NearestNeighbor(z), 0.9, 5).unwrap();
        assert!(nn.block.max_abs_diff(&nn_steady_state(CovarianceBlock::vacuum(), z, 0.9).unwrap()) < 1e-15);
        assert!(!nn.truncation_warning);

        let law = CorrelationLaw::Algebraic { zeta: z, decay: 2.0 };
        let gs = general_steady_state(CovarianceBlock::vacuum(), &law, 0.4, 200).unwrap();
        let exact = algebraic_steady_state(CovarianceBlock::vacuum(), z, 2.0, 0.4).unwrap();
        assert!(gs.block.max_abs_diff(&exact) < 1e-14);
        assert!(!gs.truncation_warning);

        let short = general_steady_state(CovarianceBlock::vacuum(), &law, 0.4, 3).unwrap();
        assert!(short.truncation_warning);
        assert!(short.block.max_abs_diff(&exact) <= short.tail_estimate);

        let slow = CorrelationLaw::Explicit(vec![z; 50]);
        assert!(general_steady_state(CovarianceBlock::vacuum(), &slow, 0.1, 10).unwrap().truncation_warning);
        assert!(general_steady_state(CovarianceBlock::vacuum(), &slow, 0.0, 10).is_err());
    }
}
