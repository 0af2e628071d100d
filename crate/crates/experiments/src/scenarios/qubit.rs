use homogen_core::qubit::{partial_swap_gate, prepare_graph_state, run_correlated_collisions, MAX_QUBITS};
use homogen_core::tensor::{mutual_information, StateVector};
use homogen_core::{CirculantGraph64, QubitCollisionConfig64, StateVector64};
use num_complex::Complex64;

use super::{blame, settle_collisions, Checks, Computed};
use crate::config::Params;
use crate::error::{ExperimentError, Result};

const STATE_TOLERANCE: f64 = 1e-10;

fn guard(qubits: usize, what: &str) -> Result<()> {
    if qubits > MAX_QUBITS {
        return Err(ExperimentError::ResourceGuard(format!(
            "{what} needs {qubits} qubits, above the limit of {MAX_QUBITS}"
        )));
    }
    Ok(())
}

fn order_columns(prefix: &str, orders: &[usize]) -> Vec<String> {
    orders.iter().map(|o| format!("{prefix}_NN{o}")).collect()
}

/// Norm of the pure state, and trace and positivity of one reduced state.
fn check_state(checks: &mut Checks, subject: &str, psi: &StateVector64) -> Result<()> {
    checks.deviation(subject, "norm_deviation", (psi.norm_sqr() - 1.0).abs(), STATE_TOLERANCE);
    let rho = psi.reduced_density_matrix(&[psi.n_qubits() - 1])?;
    checks.deviation(subject, "reduced_trace_deviation", (rho.matrix().trace().re - 1.0).abs(), STATE_TOLERANCE);
    let min = rho.eigenvalues()?.into_iter().fold(f64::INFINITY, f64::min);
    checks.deviation(subject, "reduced_negativity", (-min).max(0.0), STATE_TOLERANCE);
    Ok(())
}

fn graph(n: usize, order: usize, k: f64) -> Result<CirculantGraph64> {
    CirculantGraph64::nearest_neighbors(n, order, k).map_err(blame("neighbors"))
}

pub fn finish_population_vs_size(p: &mut Params) -> Result<()> {
    let (lo, hi) = (p.count("n_min"), p.count("n_max"));
    if lo > hi {
        return Err(ExperimentError::parameter("n_min", format!("{lo} exceeds n_max = {hi}")));
    }
    guard(hi, "the largest ring")
}

pub fn population_vs_size(p: &Params) -> Result<Computed> {
    let orders = p.counts("neighbors");
    let k = p.real("k");
    let mut columns = vec!["N_A".to_string()];
    columns.extend(order_columns("p", &orders));
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for n in p.count("n_min")..=p.count("n_max") {
        let mut row = vec![n as f64];
        for &o in &orders {
            let psi = prepare_graph_state(&graph(n, o, k)?, false)?;
            check_state(&mut checks, "graph_state", &psi)?;
            row.push(psi.excited_population(0)?);
        }
        rows.push(row);
    }
    Ok(Computed {
        columns,
        rows,
        checks: checks.into_vec(),
    })
}

pub fn finish_population_vs_strength(p: &mut Params) -> Result<()> {
    if p.real("k_min") > p.real("k_max") {
        return Err(ExperimentError::parameter("k_min", "exceeds k_max"));
    }
    guard(p.count("n_ancillas"), "the graph state")
}

pub fn population_vs_strength(p: &Params) -> Result<Computed> {
    let orders = p.counts("neighbors");
    let n = p.count("n_ancillas");
    let (lo, hi, points) = (p.real("k_min"), p.real("k_max"), p.count("k_points"));
    let mut columns = vec!["k".to_string()];
    columns.extend(order_columns("p", &orders));
    let mut checks = Checks::default();
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let k = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let mut row = vec![k];
        for &o in &orders {
            let psi = prepare_graph_state(&graph(n, o, k)?, false)?;
            check_state(&mut checks, "graph_state", &psi)?;
            row.push(psi.excited_population(0)?);
        }
        rows.push(row);
    }
    Ok(Computed {
        columns,
        rows,
        checks: checks.into_vec(),
    })
}

pub fn finish_mi_profile(p: &mut Params) -> Result<()> {
    if p.count("n_ancillas") < 2 {
        return Err(ExperimentError::parameter("n_ancillas", "a profile needs at least 2 ancillas"));
    }
    guard(p.count("n_ancillas"), "the graph state")
}

/// `I(1:n)` for `n = 2..=N_A`, with a ring-symmetry check
/// `I(1:n) = I(1:N_A+2-n)`.
pub fn mi_profile(p: &Params) -> Result<Computed> {
    let orders = p.counts("neighbors");
    let n_a = p.count("n_ancillas");
    let k = p.real("k");
    let mut checks = Checks::default();
    let mut curves = Vec::new();
    for &o in &orders {
        let psi = prepare_graph_state(&graph(n_a, o, k)?, false)?;
        check_state(&mut checks, "graph_state", &psi)?;
        let curve: Vec<f64> = (2..=n_a)
            .map(|n| mutual_information(&psi, 0, n - 1))
            .collect::<homogen_core::Result<_>>()?;
        for n in 2..=n_a {
            let mirror = n_a + 2 - n;
            checks.deviation("mi_profile", "ring_asymmetry", (curve[n - 2] - curve[mirror - 2]).abs(), 1e-10);
        }
        curves.push(curve);
    }
    let mut columns = vec!["n".to_string()];
    columns.extend(order_columns("I", &orders));
    let rows = (2..=n_a)
        .map(|n| std::iter::once(n as f64).chain(curves.iter().map(|c| c[n - 2])).collect())
        .collect();
    Ok(Computed {
        columns,
        rows,
        checks: checks.into_vec(),
    })
}

fn dynamics_graph(p: &Params) -> Result<CirculantGraph64> {
    CirculantGraph64::new(p.count("n_ancillas"), p.reals("coeffs").to_vec(), p.real("k")).map_err(blame("coeffs"))
}

pub fn finish_population_dynamics(p: &mut Params) -> Result<()> {
    settle_collisions(p)?;
    dynamics_graph(p)?;
    guard(p.count("n_ancillas") + 1, "system plus ancillas")
}

pub fn population_dynamics(p: &Params) -> Result<Computed> {
    let spec = dynamics_graph(p)?;
    let mut checks = Checks::default();
    check_state(&mut checks, "graph_state", &prepare_graph_state(&spec, false)?)?;
    let mut config = QubitCollisionConfig64::new(spec, p.real("tau"));
    config.n_collisions = p.count("n_collisions");
    let t = run_correlated_collisions(&config)?;
    let u = t.uncorrelated_populations.expect("uncorrelated reference is on by default");
    for x in t.populations.iter().chain(&u) {
        checks.deviation("populations", "outside_unit_interval", (-x).max(x - 1.0).max(0.0), STATE_TOLERANCE);
    }
    let rows = t
        .populations
        .iter()
        .zip(&u)
        .enumerate()
        .map(|(n, (a, b))| vec![n as f64, *a, *b])
        .collect();
    Ok(Computed {
        columns: vec!["n".into(), "p".into(), "p_uncorr".into()],
        rows,
        checks: checks.into_vec(),
    })
}

pub fn finish_mi_dynamics(p: &mut Params) -> Result<()> {
    let n = p.count("n_ancillas");
    if n < 2 {
        return Err(ExperimentError::parameter("n_ancillas", "a profile needs at least 2 ancillas"));
    }
    if p.count("mi_reference") > n {
        return Err(ExperimentError::parameter("mi_reference", format!("must lie in 1..={n}")));
    }
    let orders = p.counts("neighbors");
    if orders.contains(&0) {
        guard(2 * n + 1, "the purified uncorrelated chain")?;
    }
    guard(n + 1, "system plus ancillas")
}

/// Independent ancillas `diag(1 - p_A, p_A)`, each purified by a partner
/// qubit: system at 0, ancilla `m` at `m`, its partner at `N_A + m`.
fn purified_chain(n_a: usize, p_a: f64) -> Result<StateVector64> {
    let n = 2 * n_a + 1;
    let (a0, a1) = ((1.0 - p_a).sqrt(), p_a.sqrt());
    let amps = (0..1usize << n)
        .map(|x| {
            let bit = |q: usize| (x >> (n - 1 - q)) & 1;
            if bit(0) == 1 {
                return Complex64::new(0.0, 0.0);
            }
            (1..=n_a).fold(Complex64::new(1.0, 0.0), |acc, m| match (bit(m), bit(n_a + m)) {
                (0, 0) => acc * a0,
                (1, 1) => acc * a1,
                _ => Complex64::new(0.0, 0.0),
            })
        })
        .collect();
    Ok(StateVector::from_amplitudes(amps)?)
}

fn uncorrelated_profiles(n_a: usize, p_a: f64, tau: f64, reference: usize, checks: &mut Checks) -> Result<Vec<Vec<f64>>> {
    let mut psi = purified_chain(n_a, p_a)?;
    check_state(checks, "purified_chain", &psi)?;
    let gate = partial_swap_gate(tau)?;
    let partners: Vec<usize> = (1..=n_a).filter(|&m| m != reference).collect();
    let profile = |psi: &StateVector64| -> homogen_core::Result<Vec<f64>> {
        partners.iter().map(|&m| mutual_information(psi, reference, m)).collect()
    };
    let mut out = vec![profile(&psi)?];
    for step in 1..=n_a {
        psi.apply_two_qubit_gate(&gate, 0, step)?;
        out.push(profile(&psi)?);
    }
    check_state(checks, "purified_chain", &psi)?;
    Ok(out)
}

/// Long format `(neighbors, step, m, mi)`. Order 0 runs independent
/// ancillas with the local state of the order-1 graph.
pub fn mi_dynamics(p: &Params) -> Result<Computed> {
    let n_a = p.count("n_ancillas");
    let (k, tau) = (p.real("k"), p.real("tau"));
    let reference = p.count("mi_reference");
    let partners: Vec<usize> = (1..=n_a).filter(|&m| m != reference).collect();
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for &o in &p.counts("neighbors") {
        let profiles = if o == 0 {
            let psi = prepare_graph_state(&graph(n_a, 1, k)?, false)?;
            let p_a = psi.excited_population(0)?;
            uncorrelated_profiles(n_a, p_a, tau, reference, &mut checks)?
        } else {
            let spec = graph(n_a, o, k)?;
            check_state(&mut checks, "graph_state", &prepare_graph_state(&spec, false)?)?;
            let mut config = QubitCollisionConfig64::new(spec, tau);
            config.record_mi = true;
            config.mi_reference_ancilla = reference;
            config.compare_uncorrelated = false;
            run_correlated_collisions(&config)?
                .mi_profiles
                .expect("profiles were requested")
        };
        for (step, profile) in profiles.iter().enumerate() {
            for (&m, &mi) in partners.iter().zip(profile) {
                checks.deviation("mutual_information", "negativity", (-mi).max(0.0), STATE_TOLERANCE);
                rows.push(vec![o as f64, step as f64, m as f64, mi]);
            }
        }
    }
    Ok(Computed {
        columns: vec!["neighbors".into(), "step".into(), "m".into(), "mi".into()],
        rows,
        checks: checks.into_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use homogen_core::tensor::DensityMatrix;

    #[test]
    fn purified_chain_has_product_marginals() {
        let psi = purified_chain(3, 0.2).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-14);
        let single = DensityMatrix::qubit_diagonal(0.2).unwrap();
        let product = single.tensor(&single);
        for m in 1..=3 {
            assert!((psi.excited_population(m).unwrap() - 0.2).abs() < 1e-14);
        }
        for m in 2..=3 {
            let pair = psi.reduced_density_matrix(&[1, m]).unwrap();
            assert!(pair.matrix().max_abs_diff(product.matrix()) < 1e-14);
        }
        assert_eq!(psi.excited_population(0).unwrap(), 0.0);
    }

    #[test]
    fn uncorrelated_chain_starts_without_correlations() {
        let mut checks = Checks::default();
        let profiles = uncorrelated_profiles(4, 0.1, 1.0, 1, &mut checks).unwrap();
        assert_eq!(profiles.len(), 5);
        assert!(profiles[0].iter().all(|&x| x.abs() < 1e-12));
        assert!(profiles[4].iter().any(|&x| x > 1e-6));
        assert!(checks.into_vec().iter().all(|c| c.passed));
    }
}
