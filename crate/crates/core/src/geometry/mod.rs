//! Bures-Wasserstein geometry of centred Gaussians, identified with their covariances.

mod certificate;
pub(crate) mod distance;
mod problem;
mod solver;

pub use certificate::verify_barycentre_certificate;
pub use distance::{bw_distance, bw_distance_sq, frechet_functional, optimal_map};
pub use problem::{BarycentreProblem, SolverSettings};
pub use solver::{barycentre_fixed_point, BarycentreResult, IterationRecord};
