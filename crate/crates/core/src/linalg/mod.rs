//! Dense symmetric linear algebra with explicit tolerances.
//!
//! Every matrix function goes through a full eigendecomposition:
//! `f(M) = V diag(f(lambda)) V^T`. Two thresholds govern how small eigenvalues
//! are treated, both relative to `max(1, lambda_max)`:
//!
//! * `tau_psd = 1e-8 * max(1, lambda_max)`: eigenvalues in `[-tau_psd, 0)` are
//!   rounding noise and are clamped to zero, anything more negative is `NotPsd`.
//! * `tau_rank = rank_tol * max(1, lambda_max)` (default `rank_tol = 1e-10`):
//!   eigenvalues below it count as kernel directions.
//!
//! The constants above are the `f64` ones; see [`Scalar`] for the `f32` values.

mod eigen;
mod types;

pub use eigen::{eig_sym, SpectralDecomp};
pub(crate) use types::check_psd_spectrum;
pub use types::{CovMatrix, SymMap};

use crate::error::{BwError, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// `tau_psd` for a spectrum with the given largest eigenvalue.
pub fn psd_tolerance<T: Scalar>(lambda_max: T) -> T {
    T::of(T::PSD_TOL) * lambda_max.max(T::one())
}

/// `tau_rank` for a spectrum with the given largest eigenvalue.
pub fn rank_threshold<T: Scalar>(lambda_max: T, rank_tol: T) -> T {
    rank_tol * lambda_max.max(T::one())
}

/// The default relative rank tolerance for `T`.
pub fn default_rank_tol<T: Scalar>() -> T {
    T::of(T::RANK_TOL)
}

pub(crate) fn psd_spectrum<T: Scalar>(m: &CovMatrix<T>) -> Result<SpectralDecomp<T>> {
    let spec = m.spectral()?;
    check_psd_spectrum(&spec)?;
    Ok(spec)
}

/// Principal square root of a PSD matrix.
pub fn sqrt_psd<T: Scalar>(m: &CovMatrix<T>) -> Result<CovMatrix<T>> {
    let spec = psd_spectrum(m)?;
    Ok(sqrt_from_spectrum(&spec))
}

pub(crate) fn sqrt_from_spectrum<T: Scalar>(spec: &SpectralDecomp<T>) -> CovMatrix<T> {
    CovMatrix::from_psd_unchecked(spec.reconstruct_with(|l| l.max(T::zero()).sqrt()))
}

/// Pseudo-inverse square root with the default rank tolerance.
pub fn pinv_sqrt<T: Scalar>(m: &CovMatrix<T>) -> Result<CovMatrix<T>> {
    pinv_sqrt_with(m, default_rank_tol())
}

/// `M^{-1/2}` on the range of `M` (eigenvalues above `tau_rank`), zero on its complement.
pub fn pinv_sqrt_with<T: Scalar>(m: &CovMatrix<T>, rank_tol: T) -> Result<CovMatrix<T>> {
    let spec = psd_spectrum(m)?;
    Ok(pinv_sqrt_from_spectrum(&spec, rank_tol))
}

pub(crate) fn pinv_sqrt_from_spectrum<T: Scalar>(spec: &SpectralDecomp<T>, rank_tol: T) -> CovMatrix<T> {
    let thr = rank_threshold(spec.max_eigenvalue(), rank_tol);
    CovMatrix::from_psd_unchecked(spec.reconstruct_with(|l| if l > thr { T::one() / l.sqrt() } else { T::zero() }))
}

/// Orthogonal projector onto the span of eigenvectors with eigenvalue above `tau_rank`.
pub fn range_projector<T: Scalar>(m: &CovMatrix<T>, rank_tol: T) -> Result<Matrix<T>> {
    let spec = psd_spectrum(m)?;
    let thr = rank_threshold(spec.max_eigenvalue(), rank_tol);
    Ok(spec.reconstruct_with(|l| if l > thr { T::one() } else { T::zero() }))
}

/// Operator (spectral) norm of a symmetric matrix: `max |lambda|`.
pub fn operator_norm<T: Scalar, M: AsRef<Matrix<T>>>(m: &M) -> Result<T> {
    let spec = eig_sym(m)?;
    Ok(spec.max_eigenvalue().abs().max(spec.min_eigenvalue().abs()))
}

/// Operator norm of a general square matrix, `sqrt(lambda_max(M^T M))`.
pub fn spectral_norm<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    let gram = &m.transpose() * m;
    Ok(eig_sym(&gram)?.max_eigenvalue().max(T::zero()).sqrt())
}

/// Number of eigenvalues below `rank_tol * max(1, lambda_max)`.
pub fn kernel_dim<T: Scalar>(m: &CovMatrix<T>, rank_tol: T) -> Result<usize> {
    let spec = psd_spectrum(m)?;
    let thr = rank_threshold(spec.max_eigenvalue(), rank_tol);
    Ok(spec.eigenvalues().iter().filter(|&&l| l < thr).count())
}

/// `dim - kernel_dim` at the same tolerance.
pub fn rank<T: Scalar>(m: &CovMatrix<T>, rank_tol: T) -> Result<usize> {
    Ok(m.dim() - kernel_dim(m, rank_tol)?)
}

/// Orthonormal basis (as columns) of the numerical kernel.
pub fn kernel_basis<T: Scalar>(m: &CovMatrix<T>, rank_tol: T) -> Result<Matrix<T>> {
    let spec = psd_spectrum(m)?;
    let thr = rank_threshold(spec.max_eigenvalue(), rank_tol);
    Ok(spec.eigenvectors_where(|l| l < thr))
}

fn singular_values<T: Scalar>(x: &Matrix<T>) -> Result<Vec<T>> {
    if x.cols() == 0 {
        return Ok(Vec::new());
    }
    let gram = &x.transpose() * x;
    Ok(eig_sym(&gram)?.eigenvalues().iter().map(|&l| l.max(T::zero()).sqrt()).collect())
}

/// Principal angles (radians, ascending) between the column spans of `a` and `b`.
///
/// Both inputs must have orthonormal columns. Small angles come from the sines
/// `sigma((I - A A^T) B)` and large ones from the cosines `sigma(A^T B)`, the
/// switch happening at `pi/4`.
pub fn principal_angles<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Vec<T>> {
    if a.rows() != b.rows() {
        return Err(BwError::DimensionMismatch { expected: a.rows(), found: b.rows() });
    }
    let (a, b) = if b.cols() <= a.cols() { (a, b) } else { (b, a) };
    let k = b.cols();
    if k == 0 {
        return Ok(Vec::new());
    }
    let projected = &(a * &a.transpose()) * b;
    let residual = b - &projected;

    // Sines ascending, cosines descending: both orders list angles smallest first.
    let mut sines = singular_values(&residual)?;
    sines.reverse();
    let cosines = singular_values(&(&a.transpose() * b))?;
    let quarter = T::of(std::f64::consts::FRAC_PI_4);
    Ok(sines
        .into_iter()
        .zip(cosines)
        .map(|(s, c)| {
            let from_sin = s.min(T::one()).asin();
            if from_sin < quarter {
                from_sin
            } else {
                c.min(T::one()).acos()
            }
        })
        .collect())
}
