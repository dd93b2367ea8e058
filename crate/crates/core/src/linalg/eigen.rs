//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Rotations are applied only when an off-diagonal entry is large relative to
//! the geometric mean of the two diagonal entries it couples. On graded
//! positive semidefinite matrices such as `D H D` with `D` diagonal this keeps
//! small eigenvalues accurate to a relative (not only normwise) error, which
//! the square roots taken downstream depend on.

use crate::error::{BwError, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order and the matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomp<T> {
    eigenvalues: Vec<T>,
    eigenvectors: Matrix<T>,
}

impl<T: Scalar> SpectralDecomp<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues, largest first.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors stored as columns, in the order of [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &Matrix<T> {
        &self.eigenvectors
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[self.dim() - 1]
    }

    /// `V diag(f(lambda)) V^T`, symmetric by construction.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        let n = self.dim();
        let mapped: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = T::zero();
                for (k, &d) in mapped.iter().enumerate() {
                    if d != T::zero() {
                        acc = acc + v[(i, k)] * d * v[(j, k)];
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.reconstruct_with(|l| l)
    }

    /// Columns of the eigenvector matrix selected by `keep(eigenvalue)`.
    pub fn eigenvectors_where(&self, keep: impl Fn(T) -> bool) -> Matrix<T> {
        let cols: Vec<usize> = (0..self.dim()).filter(|&k| keep(self.eigenvalues[k])).collect();
        Matrix::from_fn(self.dim(), cols.len(), |i, j| self.eigenvectors[(i, cols[j])])
    }
}

/// Symmetric eigendecomposition.
///
/// The input is symmetrized as `(M + M^T) / 2` first. Eigenvalues come out in
/// descending order (stable with respect to the diagonal position at
/// convergence), and each eigenvector is signed so that its largest-magnitude
/// component is positive, the lowest index winning ties. Identical input bits
/// give identical output bits.
pub fn eig_sym<T: Scalar, M: AsRef<Matrix<T>>>(m: &M) -> Result<SpectralDecomp<T>> {
    let m = m.as_ref();
    if !m.is_square() || m.rows() == 0 {
        return Err(BwError::InvalidInput(format!(
            "eigendecomposition needs a non-empty square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(BwError::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.rows();
    let mut a = m.symmetrized();
    let mut v = Matrix::identity(n);
    jacobi_sweeps(&mut a, &mut v)?;

    let diag = a.diagonal();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));

    let eigenvalues: Vec<T> = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    for j in 0..n {
        let mut pivot = 0;
        let mut best = T::zero();
        for i in 0..n {
            let x = eigenvectors[(i, j)].abs();
            if x > best {
                best = x;
                pivot = i;
            }
        }
        if eigenvectors[(pivot, j)] < T::zero() {
            for i in 0..n {
                eigenvectors[(i, j)] = -eigenvectors[(i, j)];
            }
        }
    }
    Ok(SpectralDecomp { eigenvalues, eigenvectors })
}

fn jacobi_sweeps<T: Scalar>(a: &mut Matrix<T>, v: &mut Matrix<T>) -> Result<()> {
    let n = a.rows();
    let eps = T::epsilon();
    let half = T::of(0.5);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs() <= eps * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;

                let theta = half * (aqq - app) / apq;
                let t = if theta.abs() > T::of(1e150) {
                    half / theta
                } else {
                    let t = T::one() / (theta.abs() + (T::one() + theta * theta).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let tau = s / (T::one() + c);

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let g = a[(r, p)];
                    let h = a[(r, q)];
                    if g == T::zero() && h == T::zero() {
                        continue;
                    }
                    let new_rp = g - s * (h + g * tau);
                    let new_rq = h + s * (g - h * tau);
                    a[(r, p)] = new_rp;
                    a[(p, r)] = new_rp;
                    a[(r, q)] = new_rq;
                    a[(q, r)] = new_rq;
                }
                for r in 0..n {
                    let g = v[(r, p)];
                    let h = v[(r, q)];
                    v[(r, p)] = g - s * (h + g * tau);
                    v[(r, q)] = h + s * (g - h * tau);
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(BwError::Numerical(format!("Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps")))
}
