//! Named scenarios with their parameter schemas.

use std::sync::LazyLock;

use crate::config::{Interval, Kind, Model, ParamSpec, Params, Value};
use crate::error::{ExperimentError, Result};
use crate::scenarios::{self, Computed};
use crate::table::PlotHint;

pub struct Scenario {
    pub name: &'static str,
    pub model: Model,
    /// What the output reproduces; written to the metadata block.
    pub target: &'static str,
    pub params: Vec<ParamSpec>,
    pub plot: PlotHint,
    finish: fn(&mut Params) -> Result<()>,
    compute: fn(&Params) -> Result<Computed>,
}

impl Scenario {
    /// Cross-parameter validation and derived defaults, run before any
    /// computation.
    pub fn finish(&self, params: &mut Params) -> Result<()> {
        (self.finish)(params)
    }

    pub fn compute(&self, params: &Params) -> Result<Computed> {
        (self.compute)(params)
    }
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario").field("name", &self.name).field("model", &self.model).finish()
    }
}

pub fn all() -> &'static [Scenario] {
    &CATALOG
}

pub fn find(name: &str) -> Result<&'static Scenario> {
    CATALOG
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| ExperimentError::UnknownScenario(name.to_string()))
}

fn int(x: u64) -> Option<Value> {
    Some(Value::Int(x))
}

fn real(x: f64) -> Option<Value> {
    Some(Value::Real(x))
}

fn reals(x: &[f64]) -> Option<Value> {
    Some(Value::Reals(x.to_vec()))
}

fn ints(x: &[u64]) -> Option<Value> {
    Some(Value::Ints(x.to_vec()))
}

fn n_ancillas(default: u64) -> ParamSpec {
    ParamSpec::new("n_ancillas", Kind::count(1), int(default), "number of ancillas N_A (alias N_A)")
}

fn strength(default: f64) -> ParamSpec {
    ParamSpec::new("k", Kind::Real(Interval::ANY), real(default), "overall graph interaction strength")
}

fn tau(default: f64) -> ParamSpec {
    ParamSpec::new("tau", Kind::Real(Interval::ANY), real(default), "collision angle")
}

fn neighbors(default: &[u64], min: u64) -> ParamSpec {
    ParamSpec::new(
        "neighbors",
        Kind::Counts { min, max: 64 },
        ints(default),
        "nearest-neighbour orders, one curve each",
    )
}

fn coeffs() -> ParamSpec {
    ParamSpec::new(
        "coeffs",
        Kind::reals(1, 512, Interval::ANY),
        reals(&[1.0]),
        "graph weights c_1, c_2, ... by ring distance",
    )
}

fn n_collisions() -> ParamSpec {
    ParamSpec::new("n_collisions", Kind::count(1), None, "collisions to run (default N_A, or N_A/2 for steady-state checks)")
}

fn output() -> ParamSpec {
    ParamSpec::new("output", Kind::Path, None, "CSV file name, relative to --output-dir")
}

fn block(name: &'static str, default: &[f64], help: &'static str) -> ParamSpec {
    ParamSpec::new(name, Kind::reals(2, 4, Interval::ANY), reals(default), help)
}

fn law_params(n: u64) -> Vec<ParamSpec> {
    vec![
        n_ancillas(n),
        n_collisions(),
        tau(0.5),
        ParamSpec::new(
            "law",
            Kind::Choice(&["nn", "algebraic", "graph"]),
            Some(Value::Text("nn".into())),
            "correlation law: nn, algebraic or graph",
        ),
        block("gamma_s0", &[0.5, 0.5], "initial system block, [q, p] diagonal or 4 entries row-major"),
        block("gamma_a", &[1.5, 1.5], "local ancilla block (nn and algebraic laws)"),
        block("zeta", &[0.1, -0.1], "nearest-neighbour correlation block (nn and algebraic laws)"),
        ParamSpec::new(
            "decay_constant",
            Kind::Real(Interval::above(1.0)),
            real(3.0),
            "K in zeta_d = K^(1-d) zeta (algebraic law, alias K)",
        ),
        strength(0.2),
        coeffs(),
        output(),
    ]
}

static CATALOG: LazyLock<Vec<Scenario>> = LazyLock::new(|| {
    vec![
        Scenario {
            name: "fig2a_population_vs_NA",
            model: Model::Qubit,
            target: "local excited population of the prepared graph state versus ring size",
            params: vec![
                ParamSpec::new("n_min", Kind::count(1), int(2), "smallest ring"),
                ParamSpec::new("n_max", Kind::count(1), int(16), "largest ring"),
                strength(0.7),
                neighbors(&[1, 2, 3], 1),
                output(),
            ],
            plot: PlotHint {
                x: "N_A",
                y: None,
                group_by: &[],
                magnitude: false,
                ylabel: "p_A",
            },
            finish: scenarios::qubit::finish_population_vs_size,
            compute: scenarios::qubit::population_vs_size,
        },
        Scenario {
            name: "fig2b_population_vs_k",
            model: Model::Qubit,
            target: "local excited population of the prepared graph state versus interaction strength",
            params: vec![
                n_ancillas(7),
                ParamSpec::new("k_min", Kind::Real(Interval::ANY), real(0.0), "first strength"),
                ParamSpec::new("k_max", Kind::Real(Interval::ANY), real(1.5), "last strength"),
                ParamSpec::new("k_points", Kind::count(2), int(61), "grid size"),
                neighbors(&[1, 2, 3], 1),
                output(),
            ],
            plot: PlotHint {
                x: "k",
                y: None,
                group_by: &[],
                magnitude: false,
                ylabel: "p_A",
            },
            finish: scenarios::qubit::finish_population_vs_strength,
            compute: scenarios::qubit::population_vs_strength,
        },
        Scenario {
            name: "fig2c_mi_profile",
            model: Model::Qubit,
            target: "mutual information between the first and n-th ancilla of the prepared graph state",
            params: vec![n_ancillas(7), strength(0.7), neighbors(&[1, 2, 3], 1), output()],
            plot: PlotHint {
                x: "n",
                y: None,
                group_by: &[],
                magnitude: false,
                ylabel: "I(1:n)",
            },
            finish: scenarios::qubit::finish_mi_profile,
            compute: scenarios::qubit::mi_profile,
        },
        Scenario {
            name: "fig3_population_dynamics",
            model: Model::Qubit,
            target: "system excited population per collision, graph-state ancillas against uncorrelated ancillas",
            params: vec![n_ancillas(16), strength(0.7), coeffs(), tau(1.0), n_collisions(), output()],
            plot: PlotHint {
                x: "n",
                y: Some(&["p", "p_uncorr"]),
                group_by: &[],
                magnitude: false,
                ylabel: "p",
            },
            finish: scenarios::qubit::finish_population_dynamics,
            compute: scenarios::qubit::population_dynamics,
        },
        Scenario {
            name: "fig4_mi_dynamics",
            model: Model::Qubit,
            target: "mutual information profile between ancillas after each collision; order 0 is the uncorrelated chain",
            params: vec![
                n_ancillas(7),
                strength(0.7),
                tau(1.0),
                neighbors(&[0, 1, 3], 0),
                ParamSpec::new("mi_reference", Kind::count(1), int(1), "1-based reference ancilla"),
                output(),
            ],
            plot: PlotHint {
                x: "m",
                y: Some(&["mi"]),
                group_by: &["neighbors", "step"],
                magnitude: false,
                ylabel: "I(ref:m)",
            },
            finish: scenarios::qubit::finish_mi_dynamics,
            compute: scenarios::qubit::mi_dynamics,
        },
        Scenario {
            name: "fig5_fig6_cv_correlations",
            model: Model::Gaussian,
            target: "position and momentum correlations of Gaussian graph-state ancillas versus distance",
            params: vec![
                n_ancillas(100),
                ParamSpec::new(
                    "k_values",
                    Kind::reals(1, 64, Interval::ANY),
                    reals(&[0.2, 0.5, 1.0, 2.0]),
                    "graph strengths, one curve each",
                ),
                neighbors(&[1], 1),
                ParamSpec::new("d_max", Kind::count(1), int(10), "largest distance"),
                output(),
            ],
            plot: PlotHint {
                x: "d",
                y: Some(&["zeta_q", "zeta_p"]),
                group_by: &["k", "neighbors"],
                magnitude: true,
                ylabel: "zeta_d",
            },
            finish: scenarios::gaussian::finish_correlations,
            compute: scenarios::gaussian::correlations,
        },
        Scenario {
            name: "prefactor_curve",
            model: Model::Gaussian,
            target: "steady-state prefactor 2cK/(K-c) of algebraically decaying correlations over one period of tau",
            params: vec![
                ParamSpec::new(
                    "decay_constant",
                    Kind::Reals {
                        min_len: 1,
                        max_len: 64,
                        each: Interval::above(1.0),
                        scalar_ok: true,
                    },
                    reals(&[1.05, 1.5, 3.0, 10.0]),
                    "decay constants K > 1 (alias K), one curve each",
                ),
                ParamSpec::new("tau_points", Kind::count(2), int(401), "samples on [0, 2 pi]"),
                output(),
            ],
            plot: PlotHint {
                x: "tau",
                y: Some(&["prefactor"]),
                group_by: &["K"],
                magnitude: false,
                ylabel: "2cK/(K-c)",
            },
            finish: |_| Ok(()),
            compute: scenarios::gaussian::prefactor_curve,
        },
        Scenario {
            name: "gaussian_dynamics",
            model: Model::Gaussian,
            target: "system covariance per collision: symplectic simulation, closed form, uncorrelated mixture and homogenisation gap",
            params: law_params(200),
            plot: PlotHint {
                x: "n",
                y: Some(&["sim_qq", "closed_qq", "mixture_qq", "sim_pp", "closed_pp", "mixture_pp"]),
                group_by: &[],
                magnitude: false,
                ylabel: "gamma_S",
            },
            finish: scenarios::gaussian::finish_dynamics,
            compute: scenarios::gaussian::dynamics,
        },
        Scenario {
            name: "gaussian_steady_state_check",
            model: Model::Gaussian,
            target: "long-time system covariance from simulation against the steady-state formula of the chosen law",
            params: {
                let mut p = law_params(400);
                p.push(ParamSpec::new("d_max", Kind::count(1), int(60), "truncation distance (graph law)"));
                p.push(ParamSpec::new(
                    "tolerance",
                    Kind::Real(Interval::above(0.0)),
                    real(1e-6),
                    "allowed max-norm distance to the steady state after the last collision",
                ));
                p
            },
            plot: PlotHint {
                x: "n",
                y: Some(&["residual"]),
                group_by: &[],
                magnitude: false,
                ylabel: "max |gamma_S - gamma_ss|",
            },
            finish: scenarios::gaussian::finish_steady_state,
            compute: scenarios::gaussian::steady_state,
        },
    ]
});
