//! Floating-point scalar abstraction shared by all matrix code.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// A real floating-point type usable as a matrix entry.
///
/// Besides the arithmetic from [`Float`], each implementation pins the
/// default tolerances used by symmetry checks, PSD clamping and rank
/// decisions. The `f64` values are the reference ones; `f32` scales them
/// to its shorter mantissa.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Relative symmetry tolerance, applied as `tol * max(1, max|entry|)`.
    const SYMMETRY_TOL: f64;
    /// Relative PSD tolerance, applied as `tol * max(1, lambda_max)`.
    const PSD_TOL: f64;
    /// Default relative rank tolerance, applied as `tol * max(1, lambda_max)`.
    const RANK_TOL: f64;

    /// Lossy conversion from `f64`; panics only on types that cannot hold a finite `f64`.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("scalar conversion from f64")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const SYMMETRY_TOL: f64 = 1e-12;
    const PSD_TOL: f64 = 1e-8;
    const RANK_TOL: f64 = 1e-10;
}

impl Scalar for f32 {
    const SYMMETRY_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-4;
    const RANK_TOL: f64 = 1e-5;
}
