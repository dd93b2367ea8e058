use crate::error::{BwError, Result};
use crate::linalg::CovMatrix;
use crate::scalar::Scalar;

/// Stopping and regularization settings for the fixed-point barycentre solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings<T> {
    /// Stop once `||X_{t+1} - X_t||_F / ||X_t||_F <= tol`.
    pub tol: T,
    pub max_iter: usize,
    /// Initial ridge `eps`; the map is evaluated at `X_t + eps_t I`.
    pub ridge: T,
    /// `eps_{t+1} = ridge_decay * eps_t`.
    pub ridge_decay: T,
}

impl<T: Scalar> Default for SolverSettings<T> {
    fn default() -> Self {
        Self { tol: T::of(1e-10), max_iter: 500, ridge: T::of(1e-6), ridge_decay: T::of(0.5) }
    }
}

impl<T: Scalar> SolverSettings<T> {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= T::zero() {
            return Err(BwError::InvalidInput(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(BwError::InvalidInput("max_iter must be at least 1".into()));
        }
        if !self.ridge.is_finite() || self.ridge < T::zero() {
            return Err(BwError::InvalidInput(format!("ridge must be finite and >= 0, got {}", self.ridge)));
        }
        if !(self.ridge_decay > T::zero() && self.ridge_decay < T::one()) {
            return Err(BwError::InvalidInput(format!("ridge_decay must lie in (0, 1), got {}", self.ridge_decay)));
        }
        Ok(())
    }
}

/// Weighted family of covariances whose barycentre is sought.
#[derive(Debug, Clone)]
pub struct BarycentreProblem<T> {
    inputs: Vec<CovMatrix<T>>,
    weights: Vec<T>,
    settings: SolverSettings<T>,
}

impl<T: Scalar> BarycentreProblem<T> {
    /// Checks equal dimensions, nonnegative weights and `|sum(w) - 1| <= 1e-12`.
    pub fn new(inputs: Vec<CovMatrix<T>>, weights: Vec<T>, settings: SolverSettings<T>) -> Result<Self> {
        let first = inputs.first().ok_or(BwError::InsufficientSamples { required: 1, got: 0 })?;
        let dim = first.dim();
        if let Some(bad) = inputs.iter().find(|c| c.dim() != dim) {
            return Err(BwError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        if weights.len() != inputs.len() {
            return Err(BwError::InvalidInput(format!("{} weights given for {} inputs", weights.len(), inputs.len())));
        }
        if let Some(&w) = weights.iter().find(|w| !w.is_finite() || **w < T::zero()) {
            return Err(BwError::InvalidInput(format!("weights must be finite and nonnegative, got {w}")));
        }
        // Same 1e-12 budget as the symmetry check for f64.
        let total: T = weights.iter().copied().sum();
        if (total - T::one()).abs() > T::of(T::SYMMETRY_TOL) {
            return Err(BwError::InvalidInput(format!("weights sum to {total}, expected 1")));
        }
        settings.validate()?;
        Ok(Self { inputs, weights, settings })
    }

    /// Equal weights `1/n`.
    pub fn uniform(inputs: Vec<CovMatrix<T>>, settings: SolverSettings<T>) -> Result<Self> {
        let n = inputs.len().max(1);
        let w = T::one() / T::of(n as f64);
        Self::new(inputs, vec![w; n], settings)
    }

    pub fn inputs(&self) -> &[CovMatrix<T>] {
        &self.inputs
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn settings(&self) -> &SolverSettings<T> {
        &self.settings
    }

    pub fn with_settings(mut self, settings: SolverSettings<T>) -> Result<Self> {
        settings.validate()?;
        self.settings = settings;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.inputs[0].dim()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(BwError::DimensionMismatch { expected: self.dim(), found: dim });
        }
        Ok(())
    }

    /// `sum_i w_i S_i`.
    pub fn euclidean_mean(&self) -> CovMatrix<T> {
        let n = self.dim();
        let mut acc = crate::matrix::Matrix::zeros(n, n);
        for (s, &w) in self.inputs.iter().zip(&self.weights) {
            acc = &acc + &s.matrix().scale(w);
        }
        CovMatrix::from_psd_unchecked(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eye() -> CovMatrix<f64> {
        CovMatrix::identity(2)
    }

    #[test]
    fn validates_weights_and_dims() {
        let s = SolverSettings::default();
        assert!(BarycentreProblem::new(vec![eye(), eye()], vec![0.5, 0.5], s).is_ok());
        assert!(BarycentreProblem::new(vec![eye(), eye()], vec![0.6, 0.5], s).is_err());
        assert!(BarycentreProblem::new(vec![eye(), eye()], vec![1.5, -0.5], s).is_err());
        assert!(BarycentreProblem::new(vec![eye()], vec![0.5, 0.5], s).is_err());
        assert!(matches!(
            BarycentreProblem::new(vec![eye(), CovMatrix::identity(3)], vec![0.5, 0.5], s),
            Err(BwError::DimensionMismatch { .. })
        ));
        assert!(BarycentreProblem::<f64>::new(vec![], vec![], s).is_err());
    }

    #[test]
    fn validates_settings() {
        let bad = [
            SolverSettings { tol: 0.0, ..Default::default() },
            SolverSettings { max_iter: 0, ..Default::default() },
            SolverSettings { ridge: -1.0, ..Default::default() },
            SolverSettings { ridge_decay: 1.0, ..Default::default() },
        ];
        for s in bad {
            assert!(BarycentreProblem::uniform(vec![eye()], s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn uniform_weights_sum_to_one() {
        let p = BarycentreProblem::uniform(vec![eye(), eye(), eye()], SolverSettings::default()).unwrap();
        assert_eq!(p.weights().len(), 3);
    }
}
