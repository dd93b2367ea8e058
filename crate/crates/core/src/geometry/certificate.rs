use crate::error::Result;
use crate::geometry::distance::graded_sandwich;
use crate::geometry::problem::BarycentreProblem;
use crate::linalg::{eig_sym, psd_spectrum, sqrt_from_spectrum, CovMatrix, SpectralDecomp};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// `sum_i w_i (D^{1/2} V^T S_i V D^{1/2})^{1/2}` for `C = V D V^T`, that is
/// `sum_i w_i (C^{1/2} S_i C^{1/2})^{1/2}` in the eigenbasis of `C`.
pub(crate) fn graded_root_sum<T: Scalar>(
    spec: &SpectralDecomp<T>,
    problem: &BarycentreProblem<T>,
) -> Result<Matrix<T>> {
    let n = spec.dim();
    let mut acc = Matrix::zeros(n, n);
    for (s, &w) in problem.inputs().iter().zip(problem.weights()) {
        if w == T::zero() {
            continue;
        }
        let root = sqrt_from_spectrum(&eig_sym(&graded_sandwich(spec, s.matrix(), T::zero()))?);
        acc = &acc + &root.matrix().scale(w);
    }
    Ok(acc)
}

/// Inversion-free residual of the barycentre fixed-point equation
///
/// ```text
/// C = sum_i w_i (C^{1/2} S_i C^{1/2})^{1/2}
/// ```
///
/// returned as `||C - sum_i w_i R_i||_F / max(1, ||C||_F)`. Only square roots
/// of PSD matrices are taken, so a singular candidate is handled exactly. When
/// `S_i = T_i C T_i` with PSD maps averaging to the identity, each
/// `R_i = C^{1/2} T_i C^{1/2}` and the residual vanishes up to rounding.
///
/// Everything is evaluated in the eigenbasis of `C`, where the Frobenius norm
/// is unchanged and `C` is diagonal.
pub fn verify_barycentre_certificate<T: Scalar>(candidate: &CovMatrix<T>, problem: &BarycentreProblem<T>) -> Result<T> {
    problem.check_dim(candidate.dim())?;
    let spec = psd_spectrum(candidate)?;
    let sum = graded_root_sum(&spec, problem)?;
    let d: Vec<T> = spec.eigenvalues().iter().map(|&l| l.max(T::zero())).collect();
    let residual = (&Matrix::from_diagonal(&d) - &sum).frobenius_norm();
    Ok(residual / candidate.frobenius_norm().max(T::one()))
}
