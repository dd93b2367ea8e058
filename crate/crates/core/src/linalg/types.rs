use crate::error::{BwError, Result};
use crate::linalg::eigen::{eig_sym, SpectralDecomp};
use crate::linalg::psd_tolerance;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

fn check_symmetric<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    if !m.is_square() || m.rows() == 0 {
        return Err(BwError::InvalidInput(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(BwError::InvalidInput("matrix has non-finite entries".into()));
    }
    let tol = T::of(T::SYMMETRY_TOL) * m.max_abs().max(T::one());
    let asym = m.asymmetry();
    if asym > tol {
        return Err(BwError::InvalidInput(format!("matrix is not symmetric: asymmetry {asym:e} exceeds {tol:e}")));
    }
    Ok(())
}

/// Symmetric positive semidefinite matrix: the finite truncation of a covariance operator.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix<T> {
    inner: Matrix<T>,
}

impl<T: Scalar> CovMatrix<T> {
    /// Validates symmetry and positive semidefiniteness (up to the PSD tolerance).
    ///
    /// Entries are symmetrized as `(M + M^T) / 2`; eigenvalues in `[-tau_psd, 0)` are
    /// accepted and left in place, matrix functions clamp them later.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        check_symmetric(&m)?;
        let m = m.symmetrized();
        let spec = eig_sym(&m)?;
        check_psd_spectrum(&spec)?;
        Ok(Self { inner: m })
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        if diag.is_empty() {
            return Err(BwError::InvalidInput("empty diagonal".into()));
        }
        if let Some(&bad) = diag.iter().find(|x| !x.is_finite() || **x < T::zero()) {
            return Err(BwError::InvalidInput(format!("diagonal covariance entry {bad} must be finite and >= 0")));
        }
        Ok(Self { inner: Matrix::from_diagonal(diag) })
    }

    pub fn identity(dim: usize) -> Self {
        Self { inner: Matrix::identity(dim) }
    }

    /// Wraps a matrix known to be symmetric PSD by construction (for example a
    /// spectral reconstruction with nonnegative eigenvalues).
    pub(crate) fn from_psd_unchecked(m: Matrix<T>) -> Self {
        debug_assert!(m.is_square());
        Self { inner: m }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn trace(&self) -> T {
        self.inner.trace()
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner.frobenius_norm()
    }

    pub fn spectral(&self) -> Result<SpectralDecomp<T>> {
        eig_sym(&self.inner)
    }

    pub fn scale(&self, alpha: T) -> Result<Self> {
        if alpha < T::zero() {
            return Err(BwError::InvalidInput("covariances can only be scaled by nonnegative factors".into()));
        }
        Ok(Self { inner: self.inner.scale(alpha) })
    }

    pub fn add_ridge(&self, ridge: T) -> Self {
        Self { inner: self.inner.add_identity(ridge) }
    }
}

impl<T> AsRef<Matrix<T>> for CovMatrix<T> {
    fn as_ref(&self) -> &Matrix<T> {
        &self.inner
    }
}

pub(crate) fn check_psd_spectrum<T: Scalar>(spec: &SpectralDecomp<T>) -> Result<()> {
    let tol = psd_tolerance(spec.max_eigenvalue());
    let min = spec.min_eigenvalue();
    if min < -tol {
        return Err(BwError::NotPsd { min_eigenvalue: min.as_f64(), tolerance: tol.as_f64() });
    }
    Ok(())
}

/// Symmetric matrix of a self-adjoint map; no sign constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMap<T> {
    inner: Matrix<T>,
}

impl<T: Scalar> SymMap<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        check_symmetric(&m)?;
        Ok(Self { inner: m.symmetrized() })
    }

    pub fn identity(dim: usize) -> Self {
        Self { inner: Matrix::identity(dim) }
    }

    pub(crate) fn from_symmetric_unchecked(m: Matrix<T>) -> Self {
        Self { inner: m }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn spectral(&self) -> Result<SpectralDecomp<T>> {
        eig_sym(&self.inner)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(self.spectral()?.min_eigenvalue())
    }

    /// PSD up to the PSD tolerance.
    pub fn is_psd(&self) -> Result<bool> {
        Ok(check_psd_spectrum(&self.spectral()?).is_ok())
    }

    /// Reinterprets the map as a covariance, failing with `NotPsd` if it is indefinite.
    pub fn to_cov(&self) -> Result<CovMatrix<T>> {
        check_psd_spectrum(&self.spectral()?)?;
        Ok(CovMatrix::from_psd_unchecked(self.inner.clone()))
    }
}

impl<T> AsRef<Matrix<T>> for SymMap<T> {
    fn as_ref(&self) -> &Matrix<T> {
        &self.inner
    }
}

impl<T: Scalar> From<CovMatrix<T>> for SymMap<T> {
    fn from(c: CovMatrix<T>) -> Self {
        Self { inner: c.inner }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_and_indefinite() {
        let asym = Matrix::from_rows(&[[1.0, 0.5], [0.0, 1.0]]).unwrap();
        assert!(matches!(CovMatrix::new(asym.clone()), Err(BwError::InvalidInput(_))));
        assert!(SymMap::new(asym).is_err());
        let indefinite = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(CovMatrix::new(indefinite.clone()), Err(BwError::NotPsd { .. })));
        let map = SymMap::new(indefinite).unwrap();
        assert!(!map.is_psd().unwrap());
        assert!(map.to_cov().is_err());
    }

    #[test]
    fn tiny_negative_eigenvalues_are_tolerated() {
        let m = Matrix::from_diagonal(&[1.0, -1e-12]);
        assert!(CovMatrix::new(m).is_ok());
        let m = Matrix::from_diagonal(&[1.0, -1e-6]);
        assert!(CovMatrix::new(m).is_err());
    }

    #[test]
    fn near_symmetric_input_is_symmetrized() {
        let m = Matrix::from_rows(&[[2.0, 1.0 + 1e-14], [1.0, 2.0]]).unwrap();
        let c = CovMatrix::new(m).unwrap();
        assert_eq!(c.matrix().asymmetry(), 0.0);
    }

    #[test]
    fn diagonal_constructor_validates() {
        assert!(CovMatrix::from_diagonal(&[1.0, -0.5]).is_err());
        assert!(CovMatrix::<f64>::from_diagonal(&[]).is_err());
        assert_eq!(CovMatrix::from_diagonal(&[1.0, 2.0]).unwrap().trace(), 3.0);
    }
}
