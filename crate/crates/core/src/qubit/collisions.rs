use super::{guard_qubits, partial_swap_gate, prepare_graph_state};
use crate::error::{Error, Result};
use crate::graph::CirculantGraphSpec;
use crate::scalar::Real;
use crate::tensor::{mutual_information, DensityMatrix, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub struct QubitCollisionConfig<T> {
    pub graph: CirculantGraphSpec<T>,
    /// Partial-swap angle.
    pub tau: T,
    /// Number of collisions, at most `N_A` since every ancilla is used once.
    pub n_collisions: usize,
    /// Record `I(ref : m)` over all other ancillas after every step.
    pub record_mi: bool,
    /// 1-based ancilla index used as the mutual-information reference.
    pub mi_reference_ancilla: usize,
    /// Also run the uncorrelated reference with the same local ancilla state.
    pub compare_uncorrelated: bool,
}

impl<T: Real> QubitCollisionConfig<T> {
    /// One collision per ancilla, uncorrelated comparison on, MI off.
    pub fn new(graph: CirculantGraphSpec<T>, tau: T) -> Self {
        let n_collisions = graph.n_ancillas();
        Self {
            graph,
            tau,
            n_collisions,
            record_mi: false,
            mi_reference_ancilla: 1,
            compare_uncorrelated: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.graph.n_ancillas();
        if self.n_collisions == 0 || self.n_collisions > n {
            return Err(Error::InvalidParameter(format!(
                "n_collisions = {} must lie in 1..={n}",
                self.n_collisions
            )));
        }
        if !self.tau.is_finite() {
            return Err(Error::InvalidParameter("tau must be finite".into()));
        }
        if self.record_mi && (self.mi_reference_ancilla == 0 || self.mi_reference_ancilla > n || n < 2) {
            return Err(Error::InvalidParameter(format!(
                "mi_reference_ancilla = {} must lie in 1..={n}",
                self.mi_reference_ancilla
            )));
        }
        guard_qubits(n + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    /// `p_n` for `n = 0..=n_collisions`.
    pub populations: Vec<T>,
    /// Same shape as `populations`, from independent ancillas.
    pub uncorrelated_populations: Option<Vec<T>>,
    /// Local excited population of the prepared ancillas.
    pub ancilla_population: T,
    /// Ancilla indices the MI profiles are taken against, ascending.
    pub mi_partners: Vec<usize>,
    /// `mi_profiles[n][k] = I(ref : mi_partners[k])` after `n` collisions.
    pub mi_profiles: Option<Vec<Vec<T>>>,
}

fn mi_profile<T: Real>(state: &StateVector<T>, reference: usize, partners: &[usize]) -> Result<Vec<T>> {
    partners
        .iter()
        .map(|&m| mutual_information(state, reference, m))
        .collect()
}

/// Sequential partial-swap collisions of a `|0⟩` system with a cyclic graph
/// state, tracked on the full pure state.
pub fn run_correlated_collisions<T: Real>(config: &QubitCollisionConfig<T>) -> Result<Trajectory<T>> {
    config.validate()?;
    let n = config.graph.n_ancillas();
    let mut state = prepare_graph_state(&config.graph, true)?;
    let ancilla_population = state.excited_population(1)?;
    let gate = partial_swap_gate(config.tau)?;

    let reference = config.mi_reference_ancilla;
    let mi_partners: Vec<usize> = if config.record_mi {
        (1..=n).filter(|&m| m != reference).collect()
    } else {
        Vec::new()
    };
    let mut profiles = Vec::new();

    let mut populations = Vec::with_capacity(config.n_collisions + 1);
    populations.push(state.excited_population(0)?);
    if config.record_mi {
        profiles.push(mi_profile(&state, reference, &mi_partners)?);
    }
    for step in 1..=config.n_collisions {
        state.apply_two_qubit_gate(&gate, 0, step)?;
        populations.push(state.excited_population(0)?);
        if config.record_mi {
            profiles.push(mi_profile(&state, reference, &mi_partners)?);
        }
    }

    let uncorrelated_populations = if config.compare_uncorrelated {
        let initial = prepare_graph_state(&config.graph, false)?;
        let rho_a = initial.reduced_density_matrix(&[0])?;
        let mut p = vec![populations[0]];
        p.extend(run_uncorrelated_reference(&rho_a, config.tau, config.n_collisions, populations[0])?);
        Some(p)
    } else {
        None
    };

    Ok(Trajectory {
        populations,
        uncorrelated_populations,
        ancilla_population,
        mi_partners,
        mi_profiles: config.record_mi.then_some(profiles),
    })
}

/// Iterates `ρ_S ← tr_A[U(ρ_S ⊗ ρ_A)U†]` from `ρ_S = diag(1 - p0, p0)` and
/// returns the excited population after each of the `n` steps.
pub fn run_uncorrelated_reference<T: Real>(
    rho_a: &DensityMatrix<T>,
    tau: T,
    n: usize,
    p0: T,
) -> Result<Vec<T>> {
    if rho_a.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: 1 << rho_a.n_qubits(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("at least one collision required".into()));
    }
    if !(p0 >= T::zero() && p0 <= T::one()) {
        return Err(Error::InvalidParameter(format!("initial population {p0} outside [0, 1]")));
    }
    let u = partial_swap_gate(tau)?;
    let mut rho_s = DensityMatrix::qubit_diagonal(p0)?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        rho_s = rho_s.tensor(rho_a).conjugate(&u)?.partial_trace(&[0])?;
        out.push(rho_s.excited_population());
    }
    Ok(out)
}
