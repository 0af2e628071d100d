//! Simulation core for collisional models with correlated ancillas.
//!
//! [`tensor`] and [`qubit`] hold the dense state-vector engine for the
//! partial-swap qubit model. [`gaussian`] holds the covariance-matrix engine
//! for beam-splitter collisions between bosonic modes. Both are generic over
//! the floating-point type; the aliases below fix it to `f64`.

pub mod error;
pub mod gaussian;
pub mod graph;
pub mod linalg;
pub mod qubit;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use graph::CirculantGraphSpec;
pub use linalg::{Matrix, SymmetricEigen};
pub use scalar::Real;

pub type Matrix64 = Matrix<f64>;
pub type CirculantGraph64 = CirculantGraphSpec<f64>;
pub type StateVector64 = tensor::StateVector<f64>;
pub type StateVector32 = tensor::StateVector<f32>;
pub type DensityMatrix64 = tensor::DensityMatrix<f64>;
pub type ComplexMatrix64 = tensor::ComplexMatrix<f64>;
pub type QubitCollisionConfig64 = qubit::QubitCollisionConfig<f64>;
pub type Trajectory64 = qubit::Trajectory<f64>;
pub type CovarianceBlock64 = gaussian::CovarianceBlock<f64>;
pub type CovarianceBlock32 = gaussian::CovarianceBlock<f32>;
pub type EnsembleCM64 = gaussian::EnsembleCM<f64>;
pub type CorrelationLaw64 = gaussian::CorrelationLaw<f64>;
pub type GaussianGraph64 = gaussian::GaussianGraphSpec<f64>;
