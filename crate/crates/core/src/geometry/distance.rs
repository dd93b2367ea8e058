use crate::error::{BwError, Result};
use crate::geometry::problem::BarycentreProblem;
use crate::linalg::{
    eig_sym, pinv_sqrt_from_spectrum, psd_spectrum, rank_threshold, sqrt_from_spectrum, CovMatrix, SpectralDecomp,
    SymMap,
};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

fn check_same_dim<T: Scalar>(a: &CovMatrix<T>, b: &CovMatrix<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(BwError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

/// `H B H` for symmetric `H`, symmetrized.
pub(crate) fn sandwich<T: Scalar>(h: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    (&(h * b) * h).symmetrized()
}

/// Eigenvalues at rounding level, below `dim * eps * lambda_max`, count as zero.
fn rounding_cut<T: Scalar>(spec: &SpectralDecomp<T>) -> T {
    T::epsilon() * T::of(spec.dim() as f64) * spec.max_eigenvalue().max(T::zero())
}

fn numerical_rank<T: Scalar>(spec: &SpectralDecomp<T>) -> usize {
    let cut = rounding_cut(spec);
    spec.eigenvalues().iter().filter(|&&l| l > cut).count()
}

/// `D^{1/2} (V^T B V) D^{1/2}` for `A = V D V^T`: the sandwich `A^{1/2} B A^{1/2}`
/// expressed in the eigenbasis of `A`, with eigenvalues of `A` at or below
/// `cut` replaced by zero.
///
/// The result is graded, so the Jacobi solver resolves its small eigenvalues
/// to relative accuracy. Forming the sandwich in the standard basis instead
/// leaves absolute rounding on the zero eigenvalues, which a subsequent
/// square root inflates to `sqrt(eps)`.
pub(crate) fn graded_sandwich<T: Scalar>(spec_a: &SpectralDecomp<T>, b: &Matrix<T>, cut: T) -> Matrix<T> {
    let v = spec_a.eigenvectors();
    let h = &(&v.transpose() * b) * v;
    let d: Vec<T> = spec_a.eigenvalues().iter().map(|&l| if l > cut { l.sqrt() } else { T::zero() }).collect();
    Matrix::from_fn(h.rows(), h.cols(), |i, j| d[i] * h[(i, j)] * d[j]).symmetrized()
}

fn graded_fidelity<T: Scalar>(spec_a: &SpectralDecomp<T>, b: &Matrix<T>) -> Result<T> {
    let spec = eig_sym(&graded_sandwich(spec_a, b, rounding_cut(spec_a)))?;
    Ok(spec.eigenvalues().iter().map(|&l| l.max(T::zero()).sqrt()).sum())
}

/// The fidelity `tr((A^{1/2} B A^{1/2})^{1/2})`, symmetric in its arguments.
///
/// It is evaluated in the eigenbasis of the argument with lower numerical
/// rank, so the kernel of the sandwich lines up with coordinate directions;
/// with equal ranks both orders are averaged.
fn root_fidelity<T: Scalar>(spec_a: &SpectralDecomp<T>, a: &CovMatrix<T>, b: &CovMatrix<T>) -> Result<T> {
    let spec_b = psd_spectrum(b)?;
    let (ra, rb) = (numerical_rank(spec_a), numerical_rank(&spec_b));
    match ra.cmp(&rb) {
        std::cmp::Ordering::Less => graded_fidelity(spec_a, b.matrix()),
        std::cmp::Ordering::Greater => graded_fidelity(&spec_b, a.matrix()),
        std::cmp::Ordering::Equal => {
            let half = T::of(0.5);
            Ok(half * (graded_fidelity(spec_a, b.matrix())? + graded_fidelity(&spec_b, a.matrix())?))
        }
    }
}

fn finish_distance<T: Scalar>(tr_a: T, tr_b: T, fidelity: T) -> Result<T> {
    let d2 = tr_a + tr_b - (fidelity + fidelity);
    if d2 >= T::zero() {
        return Ok(d2);
    }
    let slack = T::of(1e-10) * (tr_a + tr_b).max(T::one());
    if d2 >= -slack {
        Ok(T::zero())
    } else {
        Err(BwError::Numerical(format!("squared distance evaluated to {d2}")))
    }
}

/// Squared Bures-Wasserstein distance
/// `tr A + tr B - 2 tr((A^{1/2} B A^{1/2})^{1/2})`.
///
/// Results in `[-1e-10 max(1, tr A + tr B), 0)` are rounded up to zero.
pub fn bw_distance_sq<T: Scalar>(a: &CovMatrix<T>, b: &CovMatrix<T>) -> Result<T> {
    check_same_dim(a, b)?;
    finish_distance(a.trace(), b.trace(), root_fidelity(&psd_spectrum(a)?, a, b)?)
}

/// Square root of [`bw_distance_sq`].
pub fn bw_distance<T: Scalar>(a: &CovMatrix<T>, b: &CovMatrix<T>) -> Result<T> {
    Ok(bw_distance_sq(a, b)?.sqrt())
}

/// Optimal transport map from `N(0, A)` to `N(0, B)`:
/// `A^{-1/2} (A^{1/2} B A^{1/2})^{1/2} A^{-1/2}`, inverses taken on the range of `A`.
///
/// The map exists only when `ker A` is contained in `ker B`. Every kernel
/// eigenvector `v` of `A` (eigenvalue below `tau_rank`) must satisfy
/// `|B v| <= rank_tol * lambda_max(B) * dim`, otherwise `KernelNotIncluded`.
/// The result is checked to push `A` forward to `B` on the range of `A`.
pub fn optimal_map<T: Scalar>(a: &CovMatrix<T>, b: &CovMatrix<T>, rank_tol: T) -> Result<SymMap<T>> {
    check_same_dim(a, b)?;
    let n = a.dim();
    let spec_a = psd_spectrum(a)?;
    let spec_b = psd_spectrum(b)?;

    let thr = rank_threshold(spec_a.max_eigenvalue(), rank_tol);
    let kernel = spec_a.eigenvectors_where(|l| l < thr);
    let bound = rank_tol * spec_b.max_eigenvalue().max(T::zero()) * T::of(n as f64);
    for j in 0..kernel.cols() {
        let bv = b.matrix().mat_vec(&kernel.column(j));
        let leak = bv.iter().map(|&x| x * x).sum::<T>().sqrt();
        if leak > bound {
            return Err(BwError::KernelNotIncluded { leak: leak.as_f64(), bound: bound.as_f64() });
        }
    }

    let half = sqrt_from_spectrum(&spec_a);
    let inv_half = pinv_sqrt_from_spectrum(&spec_a, rank_tol);
    let middle = sqrt_from_spectrum(&eig_sym(&sandwich(half.matrix(), b.matrix()))?);
    let map = sandwich(inv_half.matrix(), middle.matrix());

    let proj = spec_a.reconstruct_with(|l| if l > thr { T::one() } else { T::zero() });
    let pushed = sandwich(&proj, &sandwich(&map, a.matrix()));
    let target = sandwich(&proj, b.matrix());
    let err = (&pushed - &target).frobenius_norm();
    let allowed = T::of(1e-7) * b.frobenius_norm().max(T::one());
    if err > allowed {
        return Err(BwError::Numerical(format!("transport map pushforward error {err:e} exceeds {allowed:e}")));
    }
    Ok(SymMap::from_symmetric_unchecked(map))
}

/// Weighted Frechet functional `sum_i w_i d^2(candidate, S_i)`.
pub fn frechet_functional<T: Scalar>(candidate: &CovMatrix<T>, problem: &BarycentreProblem<T>) -> Result<T> {
    problem.check_dim(candidate.dim())?;
    let spec = psd_spectrum(candidate)?;
    let tr_c = candidate.trace();
    let mut total = T::zero();
    for (s, &w) in problem.inputs().iter().zip(problem.weights()) {
        total = total + w * finish_distance(tr_c, s.trace(), root_fidelity(&spec, candidate, s)?)?;
    }
    Ok(total)
}
