//! Truncated versions of the shift-based maps and of the singular covariance.
//!
//! Basis vectors are numbered from 1 as `phi_1, ..., phi_N`; matrix index
//! `k - 1` holds coordinate `k`. The doubling shift sends `phi_k` to
//! `phi_{2k}` and drops `phi_k` when `2k > N`.

use crate::error::{BwError, Result};
use crate::geometry::distance::sandwich;
use crate::linalg::{CovMatrix, SymMap};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Truncated doubling shift `F`: entry `(2k, k)` is 1 for every `2k <= dim`.
pub fn doubling_shift<T: Scalar>(dim: usize) -> Result<Matrix<T>> {
    if dim < 2 {
        return Err(BwError::InvalidInput(format!("doubling shift needs dim >= 2, got {dim}")));
    }
    let mut f = Matrix::zeros(dim, dim);
    for k in 1..=dim / 2 {
        f[(2 * k - 1, k - 1)] = T::one();
    }
    Ok(f)
}

/// `F + F^T`, the adjacency matrix of the chains `k, 2k, 4k, ...` for odd `k`.
pub fn shift_symmetrization<T: Scalar>(dim: usize) -> Result<SymMap<T>> {
    let f = doubling_shift::<T>(dim)?;
    Ok(SymMap::from_symmetric_unchecked(&f + &f.transpose()))
}

/// `I + a (F + F^T)`. PSD whenever `|a| <= 1/2`.
pub fn shift_map<T: Scalar>(dim: usize, a: T) -> Result<SymMap<T>> {
    let g = shift_symmetrization::<T>(dim)?;
    Ok(SymMap::from_symmetric_unchecked(g.matrix().scale(a).add_identity(T::one())))
}

/// `T = F + F^T + c I` with `c >= 2`, checked PSD.
pub fn build_t<T: Scalar>(dim: usize, c: T) -> Result<SymMap<T>> {
    build_t_with(dim, c, false)
}

/// As [`build_t`]; `allow_indefinite` admits `c < 2`, where `T` may fail to be PSD.
pub fn build_t_with<T: Scalar>(dim: usize, c: T, allow_indefinite: bool) -> Result<SymMap<T>> {
    if !c.is_finite() {
        return Err(BwError::InvalidInput(format!("identity multiple must be finite, got {c}")));
    }
    if c < T::of(2.0) && !allow_indefinite {
        return Err(BwError::InvalidInput(format!("identity multiple must be >= 2, got {c}")));
    }
    let g = shift_symmetrization::<T>(dim)?;
    let t = SymMap::from_symmetric_unchecked(g.matrix().add_identity(c));
    if c >= T::of(2.0) && !t.is_psd()? {
        return Err(BwError::Numerical(format!("T with c = {c} failed the PSD check")));
    }
    Ok(t)
}

/// The pair `T_1 = I + (F + F^T)/2`, `T_2 = I - (F + F^T)/2`.
///
/// All entries are dyadic, so `T_1 + T_2 = 2I` holds bit-exactly.
pub fn build_pair_maps<T: Scalar>(dim: usize) -> Result<(SymMap<T>, SymMap<T>)> {
    let half = T::of(0.5);
    let maps = build_family_maps(dim, &[half, -half])?;
    let mut it = maps.into_iter();
    Ok((it.next().expect("two maps"), it.next().expect("two maps")))
}

/// Maps `I + a_i (F + F^T)` for the given coefficients, each `|a_i| <= 1/2`.
///
/// They average to the identity under weights `w` exactly when `sum_i w_i a_i = 0`;
/// see [`symmetric_coefficients`] for a uniform-weight family.
pub fn build_family_maps<T: Scalar>(dim: usize, coefficients: &[T]) -> Result<Vec<SymMap<T>>> {
    let half = T::of(0.5);
    if let Some(&a) = coefficients.iter().find(|a| a.is_nan() || a.abs() > half) {
        return Err(BwError::InvalidInput(format!("map coefficient {a} outside [-1/2, 1/2]")));
    }
    let maps: Vec<SymMap<T>> = coefficients.iter().map(|&a| shift_map(dim, a)).collect::<Result<_>>()?;
    for (a, t) in coefficients.iter().zip(&maps) {
        let min = t.min_eigenvalue()?;
        if min < T::of(-1e-12) {
            return Err(BwError::Numerical(format!("map with a = {a} has eigenvalue {min}")));
        }
    }
    Ok(maps)
}

/// `n` coefficients equally spaced on `[-1/2, 1/2]`, symmetric about zero.
pub fn symmetric_coefficients<T: Scalar>(n: usize) -> Result<Vec<T>> {
    if n < 2 {
        return Err(BwError::InsufficientSamples { required: 2, got: n });
    }
    let half = T::of(0.5);
    let step = T::one() / T::of((n - 1) as f64);
    Ok((0..n)
        .map(|i| {
            let j = n - 1 - i;
            // Mirror the upper half so a_i = -a_{n-1-i} bit-exactly.
            match i.cmp(&j) {
                std::cmp::Ordering::Less => -(half - T::of(i as f64) * step),
                std::cmp::Ordering::Equal => T::zero(),
                std::cmp::Ordering::Greater => half - T::of(j as f64) * step,
            }
        })
        .collect())
}

/// Spectrum law for the non-kernel directions of the truncated covariance.
#[derive(Debug, Clone, PartialEq)]
pub enum Decay<T> {
    /// The `k`-th non-kernel direction (counting from 1) gets `r^k`.
    Geometric(T),
    /// Explicit values, one per non-kernel direction in increasing index order.
    List(Vec<T>),
}

/// Dimension, spectrum and kernel layout of the truncated covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationConfig<T> {
    pub dim: usize,
    pub decay: Decay<T>,
    /// 1-based indices of the zero directions.
    pub kernel_pattern: Vec<usize>,
}

impl<T: Scalar> TruncationConfig<T> {
    /// Kernel on all odd indices `1, 3, 5, ...`.
    pub fn new(dim: usize, decay: Decay<T>) -> Self {
        Self { dim, decay, kernel_pattern: (1..=dim).step_by(2).collect() }
    }

    /// Geometric decay with ratio 1/2 and odd-index kernel.
    pub fn geometric(dim: usize) -> Self {
        Self::new(dim, Decay::Geometric(T::of(0.5)))
    }

    pub fn with_kernel_pattern(mut self, pattern: Vec<usize>) -> Self {
        self.kernel_pattern = pattern;
        self
    }

    fn range_indices(&self) -> Vec<usize> {
        (1..=self.dim).filter(|k| !self.kernel_pattern.contains(k)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(BwError::InvalidInput(format!("truncation dim must be >= 2, got {}", self.dim)));
        }
        let mut seen = vec![false; self.dim + 1];
        for &k in &self.kernel_pattern {
            if k == 0 || k > self.dim {
                return Err(BwError::InvalidInput(format!("kernel index {k} outside 1..={}", self.dim)));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(BwError::InvalidInput(format!("kernel index {k} repeated")));
            }
        }
        match &self.decay {
            Decay::Geometric(r) => {
                if !(*r > T::zero() && *r < T::one()) {
                    return Err(BwError::InvalidInput(format!("geometric ratio must lie in (0, 1), got {r}")));
                }
            }
            Decay::List(values) => {
                let expected = self.dim - self.kernel_pattern.len();
                if values.len() != expected {
                    return Err(BwError::InvalidInput(format!(
                        "decay list has {} values but there are {expected} non-kernel directions",
                        values.len()
                    )));
                }
                if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > T::zero())) {
                    return Err(BwError::InvalidInput(format!("decay values must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }

    /// Diagonal of the covariance, in basis order.
    pub fn spectrum(&self) -> Result<Vec<T>> {
        self.validate()?;
        let mut diag = vec![T::zero(); self.dim];
        for (pos, k) in self.range_indices().into_iter().enumerate() {
            diag[k - 1] = match &self.decay {
                Decay::Geometric(r) => r.powi(pos as i32 + 1),
                Decay::List(values) => values[pos],
            };
        }
        Ok(diag)
    }
}

/// Diagonal covariance: zero on `kernel_pattern`, decay law elsewhere.
pub fn build_sigma<T: Scalar>(config: &TruncationConfig<T>) -> Result<CovMatrix<T>> {
    CovMatrix::from_diagonal(&config.spectrum()?)
}

/// `T Sigma T`, symmetrized and validated PSD.
///
/// At finite truncation a positive definite `T` leaves the kernel dimension
/// unchanged: `ker(T Sigma T) = T^{-1} ker(Sigma)`.
pub fn conjugate<T: Scalar>(map: &SymMap<T>, sigma: &CovMatrix<T>) -> Result<CovMatrix<T>> {
    if map.dim() != sigma.dim() {
        return Err(BwError::DimensionMismatch { expected: sigma.dim(), found: map.dim() });
    }
    CovMatrix::new(sandwich(map.matrix(), sigma.matrix()))
}
