use log::warn;

use crate::error::{BwError, Result};
use crate::geometry::certificate::{graded_root_sum, verify_barycentre_certificate};
use crate::geometry::problem::BarycentreProblem;
use crate::linalg::{check_psd_spectrum, default_rank_tol, rank_threshold, CovMatrix, SpectralDecomp};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Objective increases smaller than this are treated as rounding.
const MONOTONE_SLACK: f64 = 1e-9;

/// One row of the solver trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord<T> {
    pub iteration: usize,
    /// Relative Frobenius change produced by this step.
    pub change: T,
    /// Frechet functional at the point the map was evaluated (`X_t + eps_t I`).
    pub objective: T,
    pub ridge: T,
}

#[derive(Debug, Clone)]
pub struct BarycentreResult<T> {
    pub barycentre: CovMatrix<T>,
    pub iterations: usize,
    pub final_change: T,
    pub certificate_residual: T,
    pub converged: bool,
    /// Largest increase of the objective between consecutive steps (zero if monotone).
    pub max_objective_increase: T,
    pub history: Vec<IterationRecord<T>>,
}

impl<T: Scalar> BarycentreResult<T> {
    pub fn is_monotone(&self) -> bool {
        self.max_objective_increase <= T::of(MONOTONE_SLACK)
    }
}

/// `V (K D^{-1/2})^T (K D^{-1/2}) V^T` for `Y = V D V^T` and `K` in the
/// eigenbasis of `Y`: the map `Y^{-1/2} K^2 Y^{-1/2}` as a Gram product, so
/// the next iterate is PSD by construction.
///
/// Every positive eigenvalue is inverted. `K` is graded like `D^{1/2}`, so
/// small eigenvalues do not amplify rounding, and thresholding at `tau_rank`
/// would freeze the iterate's kernel before it turns onto the barycentre's.
fn gram_step<T: Scalar>(spec: &SpectralDecomp<T>, roots: &Matrix<T>) -> Matrix<T> {
    let inv: Vec<T> =
        spec.eigenvalues().iter().map(|&l| if l > T::zero() { T::one() / l.sqrt() } else { T::zero() }).collect();
    let scaled = Matrix::from_fn(roots.rows(), roots.cols(), |i, j| roots[(i, j)] * inv[j]);
    let gram = &scaled.transpose() * &scaled;
    let v = spec.eigenvectors();
    (&(v * &gram) * &v.transpose()).symmetrized()
}

/// Fixed-point iteration for the Bures-Wasserstein barycentre:
///
/// ```text
/// X_{t+1} = Y^{-1/2} ( sum_i w_i (Y^{1/2} S_i Y^{1/2})^{1/2} )^2 Y^{-1/2},   Y = X_t + eps_t I
/// ```
///
/// with the ridge `eps_t` shrinking geometrically. `init` defaults to the
/// Euclidean mean of the inputs. The returned result carries the certificate
/// residual of the final iterate.
pub fn barycentre_fixed_point<T: Scalar>(
    problem: &BarycentreProblem<T>,
    init: Option<&CovMatrix<T>>,
) -> Result<BarycentreResult<T>> {
    let settings = *problem.settings();
    settings.validate()?;
    let mut x = match init {
        Some(c) => {
            problem.check_dim(c.dim())?;
            c.clone()
        }
        None => problem.euclidean_mean(),
    };
    let rank_tol = default_rank_tol::<T>();

    let start = x.add_ridge(settings.ridge).spectral()?;
    let thr = rank_threshold(start.max_eigenvalue(), rank_tol);
    if start.min_eigenvalue().is_nan() || start.min_eigenvalue() <= thr {
        return Err(BwError::InvalidInput(format!(
            "initial iterate plus ridge must be positive definite, smallest eigenvalue {:e}",
            start.min_eigenvalue().as_f64()
        )));
    }

    let input_trace: T = problem.inputs().iter().zip(problem.weights()).map(|(s, &w)| w * s.trace()).sum();
    let mut ridge = settings.ridge;
    let mut history = Vec::new();
    let mut max_increase = T::zero();
    let mut converged = false;
    let mut final_change = T::infinity();

    for iteration in 1..=settings.max_iter {
        let shifted = x.add_ridge(ridge);
        let spec = shifted.spectral()?;
        check_psd_spectrum(&spec)?;
        let roots = graded_root_sum(&spec, problem)?;
        let objective = shifted.trace() + input_trace - T::of(2.0) * roots.trace();
        let next = gram_step(&spec, &roots);
        if !next.is_finite() {
            return Err(BwError::NonFinite { iteration });
        }

        let change = (&next - x.matrix()).frobenius_norm() / x.frobenius_norm().max(T::min_positive_value());
        if let Some(prev) = history.last().map(|r: &IterationRecord<T>| r.objective) {
            let increase = objective - prev;
            if increase > max_increase {
                max_increase = increase;
            }
            if increase > T::of(MONOTONE_SLACK) {
                warn!("Frechet objective increased by {increase:e} at iteration {iteration}");
            }
        }
        history.push(IterationRecord { iteration, change, objective, ridge });

        x = CovMatrix::from_psd_unchecked(next);
        ridge = ridge * settings.ridge_decay;
        final_change = change;
        if change <= settings.tol {
            converged = true;
            break;
        }
    }

    let certificate_residual = verify_barycentre_certificate(&x, problem)?;
    Ok(BarycentreResult {
        barycentre: x,
        iterations: history.len(),
        final_change,
        certificate_residual,
        converged,
        max_objective_increase: max_increase,
        history,
    })
}
