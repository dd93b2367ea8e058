//! Bures-Wasserstein geometry on covariance matrices.
//!
//! The crate has three layers:
//!
//! * [`linalg`]: symmetric eigendecomposition and PSD matrix functions.
//! * [`geometry`]: distance, transport maps, the Frechet functional, the
//!   fixed-point barycentre solver and an inversion-free barycentre certificate.
//! * [`counterexample`]: a singular covariance `Sigma` (kernel on the odd basis
//!   vectors) together with shift-based maps `T_i` averaging to the identity,
//!   so that `Sigma` is the barycentre of the `T_i Sigma T_i`; plus the
//!   recurrence oracles explaining why those covariances become injective in
//!   the infinite-dimensional limit.
//!
//! All matrix code is generic over [`Scalar`] (`f32` or `f64`); the recurrence
//! oracles are generic over any signed ring, including exact rationals. The
//! aliases below fix the common choices.

pub mod counterexample;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod matrix;
pub mod scalar;

pub use error::{BwError, Result};
pub use matrix::Matrix;
pub use scalar::Scalar;

pub type Matrix64 = matrix::Matrix<f64>;
pub type CovMatrix64 = linalg::CovMatrix<f64>;
pub type SymMap64 = linalg::SymMap<f64>;
pub type SpectralDecomp64 = linalg::SpectralDecomp<f64>;
pub type BarycentreProblem64 = geometry::BarycentreProblem<f64>;
pub type SolverSettings64 = geometry::SolverSettings<f64>;
pub type TruncationConfig64 = counterexample::TruncationConfig<f64>;

pub type Matrix32 = matrix::Matrix<f32>;
pub type CovMatrix32 = linalg::CovMatrix<f32>;
pub type SymMap32 = linalg::SymMap<f32>;

/// Exact rational seeds for the recurrence oracles.
pub type Rational = num_rational::Ratio<i64>;
pub type ExactRecurrence = counterexample::RecurrenceParams<Rational>;
