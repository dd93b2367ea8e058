//! The kernel recurrence along a doubling chain and its closed form.
//!
//! If `T x` lies in the span of the odd basis vectors, then along every chain
//! `y_j = x_{2^j k}` the even coordinates of `T x` vanish, which forces
//!
//! ```text
//! plus:  y_j = -2 y_{j-1} - y_{j-2}     (T = F + F^T + 2I, T_1)
//! minus: y_j =  2 y_{j-1} - y_{j-2}     (T_2)
//! ```
//!
//! The generating functions have denominators `(1 + t)^2` and `(1 - t)^2`, so
//!
//! ```text
//! plus:  y_j = (-1)^j (b + a j + a),  a = -y_0 - y_1,  b = 2 y_0 + y_1
//! minus: y_j =         b + a j + a,   a =  y_1 - y_0,  b = 2 y_0 - y_1
//! ```
//!
//! A nonzero seed therefore never decays: it grows linearly when `a != 0`
//! and keeps constant magnitude `|b|` when `a = 0`.
//!
//! Everything here is generic over a signed ring, so the same code runs on
//! `f64`, on `i64` and on exact rationals.

use std::ops::Neg;

use num_traits::{Num, Signed, ToPrimitive};

use crate::error::{BwError, Result};

/// Selects the denominator `1 + 2t + t^2` (`Plus`) or `1 - 2t + t^2` (`Minus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecurrenceSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceParams<R> {
    pub y0: R,
    pub y1: R,
    pub sign: RecurrenceSign,
    /// Last index `J`; sequences have `J + 1` terms.
    pub horizon: usize,
}

impl<R: Copy> RecurrenceParams<R> {
    pub fn new(y0: R, y1: R, sign: RecurrenceSign, horizon: usize) -> Result<Self> {
        if horizon < 2 {
            return Err(BwError::InvalidInput(format!("recurrence horizon must be >= 2, got {horizon}")));
        }
        Ok(Self { y0, y1, sign, horizon })
    }
}

fn two<R: Num + Copy>() -> R {
    R::one() + R::one()
}

/// Iterates the recurrence directly.
pub fn kernel_recurrence_solve<R>(p: &RecurrenceParams<R>) -> Vec<R>
where
    R: Num + Copy + Neg<Output = R>,
{
    let mut ys = Vec::with_capacity(p.horizon + 1);
    ys.push(p.y0);
    ys.push(p.y1);
    for j in 2..=p.horizon {
        let (prev, prev2) = (ys[j - 1], ys[j - 2]);
        let next = match p.sign {
            RecurrenceSign::Plus => -(two::<R>() * prev) - prev2,
            RecurrenceSign::Minus => two::<R>() * prev - prev2,
        };
        ys.push(next);
    }
    ys
}

/// The pair `(a, b)` of the closed form.
pub fn closed_form_parts<R>(p: &RecurrenceParams<R>) -> (R, R)
where
    R: Num + Copy + Neg<Output = R>,
{
    match p.sign {
        RecurrenceSign::Plus => (-p.y0 - p.y1, two::<R>() * p.y0 + p.y1),
        RecurrenceSign::Minus => (p.y1 - p.y0, two::<R>() * p.y0 - p.y1),
    }
}

/// Coefficients of the generating function, evaluated from the closed form.
pub fn generating_coefficients<R>(p: &RecurrenceParams<R>) -> Vec<R>
where
    R: Num + Copy + Neg<Output = R>,
{
    let (a, b) = closed_form_parts(p);
    let mut j = R::zero();
    let mut out = Vec::with_capacity(p.horizon + 1);
    for idx in 0..=p.horizon {
        let magnitude = b + a * j + a;
        let flip = p.sign == RecurrenceSign::Plus && idx % 2 == 1;
        out.push(if flip { -magnitude } else { magnitude });
        j = j + R::one();
    }
    out
}

/// Finite certificate that a seed does not decay along its chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthWitness<R> {
    /// `y_0 = y_1 = 0`: the whole sequence vanishes.
    Zero,
    /// `a = 0, b != 0`: `|y_j| = |b|` for every `j`.
    Bounded { magnitude: R },
    /// `a != 0`: `|y_j| >= |a| j / 2` for every `j >= from_index`, where
    /// `from_index = ceil(2 |a + b| / |a|)`. `holds_on_horizon` records the
    /// check against the iterated sequence up to the horizon.
    LinearGrowth { slope: R, from_index: usize, holds_on_horizon: bool },
}

impl<R> GrowthWitness<R> {
    pub fn is_zero(&self) -> bool {
        matches!(self, GrowthWitness::Zero)
    }
}

/// Classifies the seed and checks the growth bound against the iterated sequence.
pub fn growth_witness<R>(p: &RecurrenceParams<R>) -> GrowthWitness<R>
where
    R: Num + Signed + Copy + PartialOrd + ToPrimitive,
{
    let (a, b) = closed_form_parts(p);
    if a.is_zero() && b.is_zero() {
        return GrowthWitness::Zero;
    }
    if a.is_zero() {
        return GrowthWitness::Bounded { magnitude: b.abs() };
    }
    let slope = a.abs();
    // |b + a + a j| >= |a| j - |a + b| >= |a| j / 2 once |a| j >= 2 |a + b|.
    // Divide in f64: integer rings would truncate before the ceiling.
    let ratio = match ((two::<R>() * (a + b).abs()).to_f64(), slope.to_f64()) {
        (Some(num), Some(den)) => num / den,
        _ => f64::INFINITY,
    };
    let from_index = if ratio.is_finite() { ratio.ceil().max(0.0) as usize } else { usize::MAX };

    let ys = kernel_recurrence_solve(p);
    let mut j = R::zero();
    let mut holds = true;
    for (idx, y) in ys.iter().enumerate() {
        if idx >= from_index && two::<R>() * y.abs() < slope * j {
            holds = false;
        }
        j = j + R::one();
    }
    GrowthWitness::LinearGrowth { slope, from_index, holds_on_horizon: holds }
}
