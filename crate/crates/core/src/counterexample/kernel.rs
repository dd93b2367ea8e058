//! Kernel bookkeeping at finite truncation.
//!
//! A positive definite truncated map keeps `dim ker(T Sigma T) = dim ker(Sigma)`;
//! what changes is where the kernel sits. The principal angles between
//! `ker(S_i)` and `ker(Sigma)` measure that displacement.

use crate::counterexample::construct::{build_pair_maps, build_sigma, conjugate, TruncationConfig};
use crate::error::Result;
use crate::geometry::{verify_barycentre_certificate, BarycentreProblem, SolverSettings};
use crate::linalg::{kernel_basis, kernel_dim, principal_angles, CovMatrix};
use crate::scalar::Scalar;

/// Angles below this count as a shared kernel direction.
pub const ANGLE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport<T> {
    pub sigma_kernel_dim: usize,
    pub family_kernel_dims: Vec<usize>,
    /// Principal angles (ascending) between `ker(S_i)` and `ker(Sigma)`, one list per input.
    pub principal_angles: Vec<Vec<T>>,
}

impl<T: Scalar> KernelReport<T> {
    /// Smallest principal angle for input `i`, `pi/2` when a kernel is trivial.
    pub fn min_angle(&self, i: usize) -> T {
        self.principal_angles[i].first().copied().unwrap_or_else(|| T::of(std::f64::consts::FRAC_PI_2))
    }

    pub fn max_angle(&self, i: usize) -> T {
        self.principal_angles[i].last().copied().unwrap_or_else(|| T::of(std::f64::consts::FRAC_PI_2))
    }

    /// Number of angles below [`ANGLE_FLOOR`]: the dimension of `ker(S_i) ∩ ker(Sigma)`.
    pub fn shared_directions(&self, i: usize) -> usize {
        self.principal_angles[i].iter().filter(|&&a| a < T::of(ANGLE_FLOOR)).count()
    }
}

pub fn kernel_bookkeeping<T: Scalar>(
    sigma: &CovMatrix<T>,
    family: &[CovMatrix<T>],
    rank_tol: T,
) -> Result<KernelReport<T>> {
    let sigma_kernel = kernel_basis(sigma, rank_tol)?;
    let mut family_kernel_dims = Vec::with_capacity(family.len());
    let mut angles = Vec::with_capacity(family.len());
    for s in family {
        let basis = kernel_basis(s, rank_tol)?;
        family_kernel_dims.push(basis.cols());
        angles.push(principal_angles(&sigma_kernel, &basis)?);
    }
    Ok(KernelReport { sigma_kernel_dim: sigma_kernel.cols(), family_kernel_dims, principal_angles: angles })
}

/// One row of the truncation study for the pair construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationRow<T> {
    pub dim: usize,
    pub rank_tol: T,
    pub kernel_dim_sigma: usize,
    pub kernel_dim_s1: usize,
    pub kernel_dim_s2: usize,
    pub min_eig_t1: T,
    pub min_eig_t2: T,
    pub min_angle_s1: T,
    pub min_angle_s2: T,
    pub max_angle_s1: T,
    pub max_angle_s2: T,
    pub shared_s1: usize,
    pub shared_s2: usize,
    pub certificate_residual: T,
}

/// Builds `Sigma`, `T_1`, `T_2`, `S_i = T_i Sigma T_i` for `config` and records
/// kernel dimensions, smallest map eigenvalues, principal angles and the
/// certificate residual of `Sigma`.
pub fn truncation_row<T: Scalar>(config: &TruncationConfig<T>, rank_tol: T) -> Result<TruncationRow<T>> {
    let sigma = build_sigma(config)?;
    let (t1, t2) = build_pair_maps::<T>(config.dim)?;
    let s1 = conjugate(&t1, &sigma)?;
    let s2 = conjugate(&t2, &sigma)?;
    let report = kernel_bookkeeping(&sigma, &[s1.clone(), s2.clone()], rank_tol)?;
    let problem = BarycentreProblem::uniform(vec![s1, s2], SolverSettings::default())?;
    let certificate_residual = verify_barycentre_certificate(&sigma, &problem)?;
    Ok(TruncationRow {
        dim: config.dim,
        rank_tol,
        kernel_dim_sigma: kernel_dim(&sigma, rank_tol)?,
        kernel_dim_s1: report.family_kernel_dims[0],
        kernel_dim_s2: report.family_kernel_dims[1],
        min_eig_t1: t1.min_eigenvalue()?,
        min_eig_t2: t2.min_eigenvalue()?,
        min_angle_s1: report.min_angle(0),
        min_angle_s2: report.min_angle(1),
        max_angle_s1: report.max_angle(0),
        max_angle_s2: report.max_angle(1),
        shared_s1: report.shared_directions(0),
        shared_s2: report.shared_directions(1),
        certificate_residual,
    })
}
