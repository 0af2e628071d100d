use super::density::DensityMatrix;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `S(ρ) = -Σ λ ln λ` in nats. Eigenvalues below 1e-12 count as zero.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let tr = rho.matrix().trace();
    if (tr.re - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::InvalidTrace(tr.re.as_f64()));
    }
    let cutoff = T::tol(1e-12);
    Ok(rho
        .eigenvalues()?
        .into_iter()
        .filter(|&l| l > cutoff)
        .map(|l| -l * l.ln())
        .sum())
}

/// `I(i:j) = S(ρ_i) + S(ρ_j) - S(ρ_ij)` for qubits `i`, `j` of a pure state.
pub fn mutual_information<T: Real>(state: &StateVector<T>, i: usize, j: usize) -> Result<T> {
    if i == j {
        return Err(Error::SameQubit(i));
    }
    let rho_ij = state.reduced_density_matrix(&[i, j])?;
    let rho_i = rho_ij.partial_trace(&[0])?;
    let rho_j = rho_ij.partial_trace(&[1])?;
    Ok(von_neumann_entropy(&rho_i)? + von_neumann_entropy(&rho_j)? - von_neumann_entropy(&rho_ij)?)
}

/// Binary Shannon entropy in nats.
pub fn binary_entropy<T: Real>(p: T) -> T {
    let term = |x: T| if x > T::zero() { -x * x.ln() } else { T::zero() };
    term(p) + term(T::one() - p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn entropy_examples() {
        let pure = StateVector::<f64>::basis_state(2, 1).density_matrix();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-14);
        let mixed = DensityMatrix::qubit_diagonal(0.5).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 2f64.ln()).abs() < 1e-14);
        let d = DensityMatrix::qubit_diagonal(0.75).unwrap();
        let expect = -0.25 * 0.25f64.ln() - 0.75 * 0.75f64.ln();
        assert!((von_neumann_entropy(&d).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn mutual_information_examples() {
        let product = StateVector::<f64>::basis_state(3, 0b101);
        assert!(mutual_information(&product, 0, 2).unwrap().abs() < 1e-14);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateVector::from_amplitudes(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        assert!((mutual_information(&bell, 0, 1).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-13);

        let k = 0.7f64;
        let s = StateVector::from_amplitudes(vec![c(k.cos(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -k.sin())]).unwrap();
        let expect = 2.0 * binary_entropy(k.sin().powi(2));
        assert!((mutual_information(&s, 0, 1).unwrap() - expect).abs() < 1e-13);
        assert_eq!(mutual_information(&s, 1, 1), Err(Error::SameQubit(1)));
    }
}
