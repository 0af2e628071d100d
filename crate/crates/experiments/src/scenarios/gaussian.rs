use std::f64::consts::PI;

use homogen_core::gaussian::{
    algebraic_steady_state, build_ensemble_cm, circulant_correlation_profile, closed_form_cm, ensure_bona_fide,
    general_steady_state, homogenization_gap, mixture, nn_steady_state, simulate_system_trajectory,
    steady_state_prefactor, symplectic_eigenvalues, PHYSICALITY_TOLERANCE,
};
use homogen_core::{CirculantGraph64, CorrelationLaw64, CovarianceBlock64, EnsembleCM64};

use super::{blame, settle_collisions, Checks, Computed};
use crate::config::{Params, Value};
use crate::error::{ExperimentError, Result};

/// Largest ancilla chain held as a dense covariance matrix.
pub const MAX_GAUSSIAN_ANCILLAS: usize = 1000;

fn guard(n: usize) -> Result<()> {
    if n > MAX_GAUSSIAN_ANCILLAS {
        return Err(ExperimentError::ResourceGuard(format!(
            "{n} ancillas exceed the dense covariance limit of {MAX_GAUSSIAN_ANCILLAS}"
        )));
    }
    Ok(())
}

/// `[q, p]` as a diagonal block, or four entries row-major.
fn block(p: &Params, key: &str) -> CovarianceBlock64 {
    match p.reals(key) {
        [q, pp] => CovarianceBlock64::diag(*q, *pp),
        [a, b, c, d] => CovarianceBlock64::new([[*a, *b], [*c, *d]]),
        other => unreachable!("{key} has {} entries after validation", other.len()),
    }
}

fn symmetric_block(p: &Params, key: &str) -> Result<CovarianceBlock64> {
    let b = block(p, key);
    b.ensure_symmetric().map_err(blame(key))?;
    Ok(b)
}

fn entries(b: &CovarianceBlock64) -> [f64; 3] {
    [b[(0, 0)], b[(0, 1)], b[(1, 1)]]
}

fn block_columns(prefix: &str) -> [String; 3] {
    ["qq", "qp", "pp"].map(|e| format!("{prefix}_{e}"))
}

/// Records `γ + iΩ/2 ⪰ 0` and, for graph states, `ν_min = 1/2`.
fn check_ensemble(checks: &mut Checks, subject: &str, ensemble: &EnsembleCM64, pure: bool) -> Result<()> {
    let bona_fide = ensure_bona_fide(ensemble.matrix()).is_ok();
    checks.flag(subject, "bona_fide", bona_fide, PHYSICALITY_TOLERANCE);
    if pure {
        let nu_min = symplectic_eigenvalues(ensemble.matrix())?
            .and_then(|v| v.first().copied())
            .unwrap_or(f64::NAN);
        checks.deviation(subject, "min_symplectic_eigenvalue_deviation", (nu_min - 0.5).abs(), PHYSICALITY_TOLERANCE);
    }
    Ok(())
}

pub fn finish_correlations(p: &mut Params) -> Result<()> {
    let n = p.count("n_ancillas");
    guard(n)?;
    if p.count("d_max") >= n {
        return Err(ExperimentError::parameter("d_max", format!("must be below N_A = {n}")));
    }
    Ok(())
}

/// Long format `(k, neighbors, d, zeta_q, zeta_p)` with the diagonal of `ζ_d`.
pub fn correlations(p: &Params) -> Result<Computed> {
    let n = p.count("n_ancillas");
    let d_max = p.count("d_max");
    let mut checks = Checks::default();
    let mut rows = Vec::new();
    for &k in p.reals("k_values") {
        for &o in &p.counts("neighbors") {
            let spec = CirculantGraph64::nearest_neighbors(n, o, k).map_err(blame("neighbors"))?;
            let law = CorrelationLaw64::FromGraph(spec.clone());
            let local = law.local_state().expect("graph laws carry their local state");
            let ensemble = build_ensemble_cm(CovarianceBlock64::vacuum(), local, &law, n)?;
            check_ensemble(&mut checks, "graph_ensemble", &ensemble, true)?;
            for (i, z) in circulant_correlation_profile(&spec, d_max)?.iter().enumerate() {
                rows.push(vec![k, o as f64, (i + 1) as f64, z[(0, 0)], z[(1, 1)]]);
            }
        }
    }
    Ok(Computed {
        columns: ["k", "neighbors", "d", "zeta_q", "zeta_p"].map(String::from).to_vec(),
        rows,
        checks: checks.into_vec(),
    })
}

/// Long format `(tau, K, prefactor)` on an even grid over `[0, 2π]`.
pub fn prefactor_curve(p: &Params) -> Result<Computed> {
    let points = p.count("tau_points");
    let mut rows = Vec::new();
    for &k in p.reals("decay_constant") {
        for i in 0..points {
            let tau = 2.0 * PI * i as f64 / (points - 1) as f64;
            rows.push(vec![tau, k, steady_state_prefactor(tau, k).map_err(blame("decay_constant"))?]);
        }
    }
    Ok(Computed {
        columns: ["tau", "K", "prefactor"].map(String::from).to_vec(),
        rows,
        checks: Vec::new(),
    })
}

struct Setup {
    law: CorrelationLaw64,
    gamma_s0: CovarianceBlock64,
    gamma_a: CovarianceBlock64,
    is_graph: bool,
}

/// Drops the parameters the chosen law ignores and checks the rest.
fn finish_law(p: &mut Params) -> Result<()> {
    let n = p.count("n_ancillas");
    guard(n)?;
    settle_collisions(p)?;
    let law = p.text("law").to_string();
    let reason = format!("with law = \"{law}\"");
    let unused: &[&str] = match law.as_str() {
        "nn" => &["k", "coeffs", "decay_constant", "d_max"],
        "algebraic" => &["k", "coeffs", "d_max"],
        _ => &["gamma_a", "zeta", "decay_constant"],
    };
    for key in unused {
        if p.contains(key) {
            p.discard_unused(key, &reason)?;
        }
    }
    setup(p).map(|_| ())
}

fn setup(p: &Params) -> Result<Setup> {
    let n = p.count("n_ancillas");
    let gamma_s0 = symmetric_block(p, "gamma_s0")?;
    let (law, gamma_a) = match p.text("law") {
        "nn" => (CorrelationLaw64::NearestNeighbor(block(p, "zeta")), symmetric_block(p, "gamma_a")?),
        "algebraic" => (
            CorrelationLaw64::Algebraic {
                zeta: block(p, "zeta"),
                decay: p.real("decay_constant"),
            },
            symmetric_block(p, "gamma_a")?,
        ),
        _ => {
            let spec = CirculantGraph64::new(n, p.reals("coeffs").to_vec(), p.real("k")).map_err(blame("coeffs"))?;
            let law = CorrelationLaw64::FromGraph(spec);
            let local = law.local_state().expect("graph laws carry their local state");
            (law, local)
        }
    };
    Ok(Setup {
        is_graph: matches!(law, CorrelationLaw64::FromGraph(_)),
        law,
        gamma_s0,
        gamma_a,
    })
}

pub fn finish_dynamics(p: &mut Params) -> Result<()> {
    finish_law(p)
}

/// Simulation, closed form, uncorrelated mixture and gap, one row per
/// collision number. The closed form reads the ancilla blocks exactly as
/// laid out on the finite ring.
pub fn dynamics(p: &Params) -> Result<Computed> {
    let s = setup(p)?;
    let n_a = p.count("n_ancillas");
    let n = p.count("n_collisions");
    let tau = p.real("tau");
    let ensemble = build_ensemble_cm(s.gamma_s0, s.gamma_a, &s.law, n_a)?;
    let mut checks = Checks::default();
    check_ensemble(&mut checks, "ensemble", &ensemble, s.is_graph && is_vacuum(&s.gamma_s0))?;
    let sim = simulate_system_trajectory(&ensemble, tau, n)?;
    let ring = s.law.on_ring(n_a)?;

    let mut columns = vec!["n".to_string()];
    for prefix in ["sim", "closed", "mixture", "gap"] {
        columns.extend(block_columns(prefix));
    }
    let mut rows = Vec::with_capacity(n + 1);
    for (m, sim_m) in sim.iter().enumerate() {
        let closed = closed_form_cm(m, s.gamma_s0, s.gamma_a, &ring, tau)?;
        let mix = mixture(m, s.gamma_s0, s.gamma_a, tau);
        let gap = if m == 0 {
            CovarianceBlock64::zero()
        } else {
            homogenization_gap(m, &ring, tau)?
        };
        let scale = sim_m.max_abs().max(1.0);
        checks.deviation("closed_form", "max_abs_residual", sim_m.max_abs_diff(&closed) / scale, 1e-9);
        let mut row = vec![m as f64];
        for b in [sim_m, &closed, &mix, &gap] {
            row.extend(entries(b));
        }
        rows.push(row);
    }
    Ok(Computed {
        columns,
        rows,
        checks: checks.into_vec(),
    })
}

fn is_vacuum(b: &CovarianceBlock64) -> bool {
    *b == CovarianceBlock64::vacuum()
}

/// `n_collisions` defaults to `N_A / 2`, so no collision sees a pair that
/// wraps around the ring.
pub fn finish_steady_state(p: &mut Params) -> Result<()> {
    if !p.contains("n_collisions") {
        let half = (p.count("n_ancillas") / 2).max(1);
        p.set("n_collisions", Value::Int(half as u64));
    }
    finish_law(p)?;
    if p.text("law") == "graph" {
        let n = p.count("n_ancillas");
        if p.count("d_max") >= n {
            return Err(ExperimentError::parameter("d_max", format!("must be below N_A = {n}")));
        }
    }
    // validated here so that a singular collision angle is a config error
    steady_block(p, &setup(p)?, &mut Checks::default()).map(|_| ())
}

fn steady_block(p: &Params, s: &Setup, checks: &mut Checks) -> Result<CovarianceBlock64> {
    let tau = p.real("tau");
    match &s.law {
        CorrelationLaw64::NearestNeighbor(zeta) => nn_steady_state(s.gamma_a, *zeta, tau).map_err(blame("tau")),
        CorrelationLaw64::Algebraic { zeta, decay } => {
            algebraic_steady_state(s.gamma_a, *zeta, *decay, tau).map_err(blame("tau"))
        }
        law => {
            let ss = general_steady_state(s.gamma_a, law, tau, p.count("d_max")).map_err(blame("tau"))?;
            checks.deviation("steady_state", "truncated_tail", ss.tail_estimate, 1e-10 * ss.block.max_abs().max(1.0));
            Ok(ss.block)
        }
    }
}

/// Simulated system block per collision against the steady state; the last
/// row must lie within `tolerance`.
pub fn steady_state(p: &Params) -> Result<Computed> {
    let s = setup(p)?;
    let n_a = p.count("n_ancillas");
    let tau = p.real("tau");
    let mut checks = Checks::default();
    let target = steady_block(p, &s, &mut checks)?;
    let ensemble = build_ensemble_cm(s.gamma_s0, s.gamma_a, &s.law, n_a)?;
    check_ensemble(&mut checks, "ensemble", &ensemble, s.is_graph && is_vacuum(&s.gamma_s0))?;
    let sim = simulate_system_trajectory(&ensemble, tau, p.count("n_collisions"))?;

    let mut columns = vec!["n".to_string()];
    columns.extend(block_columns("sim"));
    columns.extend(block_columns("steady"));
    columns.push("residual".into());
    let rows: Vec<Vec<f64>> = sim
        .iter()
        .enumerate()
        .map(|(m, b)| {
            let mut row = vec![m as f64];
            row.extend(entries(b));
            row.extend(entries(&target));
            row.push(b.max_abs_diff(&target));
            row
        })
        .collect();
    let last = rows.last().and_then(|r| r.last()).copied().unwrap_or(f64::NAN);
    checks.deviation("steady_state", "final_residual", last, p.real("tolerance"));
    Ok(Computed {
        columns,
        rows,
        checks: checks.into_vec(),
    })
}
