//! Gaussian collisional model on covariance matrices.
//!
//! The system and every ancilla are single bosonic modes. Each collision is
//! a beam splitter, so the ensemble covariance evolves as `γ → SγSᵀ` and the
//! system block has closed forms for translation-invariant ancilla chains.

mod block;
mod closed_form;
mod ensemble;
mod graph_state;
mod physicality;
mod symplectic;

pub use block::CovarianceBlock;
pub use closed_form::{
    algebraic_closed_form, algebraic_steady_state, closed_form_cm, general_solution_cm, general_steady_state,
    homogenization_gap, mixture, nn_closed_form, nn_steady_state, steady_state_prefactor, SteadyState,
};
pub use ensemble::{build_ensemble_cm, CorrelationLaw, EnsembleCM};
pub use graph_state::{
    circulant_correlation_profile, circulant_correlations, circulant_eigenvalues, circulant_exponential,
    circulant_local_cm, graph_cm_general, graph_exponential, nn_bessel_limit, perturbative_blocks,
    GaussianGraphSpec, GraphCovariances,
};
pub use physicality::{
    bona_fide_min_eigenvalue, ensure_bona_fide, physicality_check, symplectic_eigenvalues, symplectic_form, CovarianceMatrix,
    PhysicalityReport, PHYSICALITY_TOLERANCE,
};
pub use symplectic::{
    beam_splitter_symplectic, collide, simulate_system_trajectory, step_covariance, symplectic_deviation,
    BeamSplitter, SymplecticAction,
};
