//! Random maps `T = I + a (F + F^T)` and the population Monte-Carlo experiment.
//!
//! Coefficient draws are bit-reproducible across platforms. Draw `i` of seed
//! `s` reads from a ChaCha20 generator keyed by `ChaCha20Rng::seed_from_u64(s)`
//! with its stream set to `i`. A uniform variate is the top 53 bits of one
//! `next_u64`, scaled by `2^-53`; a random sign is the top bit of one
//! `next_u64`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::counterexample::construct::{build_sigma, conjugate, shift_map, TruncationConfig};
use crate::error::{BwError, Result};
use crate::geometry::{barycentre_fixed_point, verify_barycentre_certificate, BarycentreProblem, SolverSettings};
use crate::linalg::{CovMatrix, SymMap};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Symmetric laws for the coefficient `a` on `[-1/2, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientLaw {
    /// `a = u - 1/2` with `u` uniform on `[0, 1)`.
    Uniform,
    /// `a = +-magnitude` with probability 1/2 each.
    TwoPoint { magnitude: f64 },
    /// Symmetric triangular density on `[-1/2, 1/2]`: `a = (u_1 + u_2)/2 - 1/2`.
    Triangular,
    /// Deterministic alternation `+magnitude, -magnitude, ...` by draw index.
    /// An even number of draws averages to zero exactly.
    Antithetic { magnitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomMapLaw {
    pub law: CoefficientLaw,
    /// Redraw whenever `a == 0`.
    pub excludes_zero: bool,
}

impl RandomMapLaw {
    pub fn new(law: CoefficientLaw, excludes_zero: bool) -> Result<Self> {
        let this = Self { law, excludes_zero };
        this.validate()?;
        Ok(this)
    }

    pub fn uniform() -> Self {
        Self { law: CoefficientLaw::Uniform, excludes_zero: true }
    }

    pub fn validate(&self) -> Result<()> {
        match self.law {
            CoefficientLaw::TwoPoint { magnitude } | CoefficientLaw::Antithetic { magnitude } => {
                if !(0.0..=0.5).contains(&magnitude) {
                    return Err(BwError::InvalidInput(format!("two-point magnitude {magnitude} outside [0, 1/2]")));
                }
                if magnitude == 0.0 && self.excludes_zero {
                    return Err(BwError::InvalidInput("a two-point law at 0 cannot exclude zero".into()));
                }
            }
            CoefficientLaw::Uniform | CoefficientLaw::Triangular => {}
        }
        Ok(())
    }

    /// Variance of `a`.
    pub fn variance(&self) -> f64 {
        match self.law {
            CoefficientLaw::Uniform => 1.0 / 12.0,
            CoefficientLaw::Triangular => 1.0 / 24.0,
            CoefficientLaw::TwoPoint { magnitude } | CoefficientLaw::Antithetic { magnitude } => magnitude * magnitude,
        }
    }

    /// The `index`-th coefficient for `seed`.
    pub fn draw(&self, seed: u64, index: u64) -> f64 {
        if let CoefficientLaw::Antithetic { magnitude } = self.law {
            return if index.is_multiple_of(2) { magnitude } else { -magnitude };
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        loop {
            let a = match self.law {
                CoefficientLaw::Uniform => unit(&mut rng) - 0.5,
                CoefficientLaw::Triangular => 0.5 * (unit(&mut rng) + unit(&mut rng)) - 0.5,
                CoefficientLaw::TwoPoint { magnitude } => {
                    if rng.next_u64() >> 63 == 0 {
                        magnitude
                    } else {
                        -magnitude
                    }
                }
                CoefficientLaw::Antithetic { .. } => unreachable!(),
            };
            if !(self.excludes_zero && a == 0.0) {
                return a;
            }
        }
    }
}

fn unit(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One random map `I + a (F + F^T)` from draw 0 of `seed`.
pub fn random_map_sample<T: Scalar>(law: &RandomMapLaw, seed: u64, dim: usize) -> Result<SymMap<T>> {
    law.validate()?;
    shift_map(dim, T::of(law.draw(seed, 0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions<T> {
    /// Settings for the solver run on the empirical problem; `None` skips it.
    pub solver: Option<SolverSettings<T>>,
}

impl<T: Scalar> Default for McOptions<T> {
    fn default() -> Self {
        Self { solver: Some(SolverSettings::default()) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSolverSummary<T> {
    pub iterations: usize,
    pub converged: bool,
    pub final_change: T,
    pub certificate_residual: T,
    /// `||X - Sigma||_F` for the solver output `X`.
    pub distance_to_sigma: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McReport<T> {
    pub n: usize,
    pub seed: u64,
    pub coefficient_mean: f64,
    /// `||(1/n) sum_i T_i - I||_F`.
    pub mean_deviation: T,
    /// Certificate residual of `Sigma` against `{T_i Sigma T_i}` with weights `1/n`.
    pub certificate_residual: T,
    pub solver: Option<McSolverSummary<T>>,
}

/// Draws `n` maps, forms `S_i = T_i Sigma T_i` and checks `Sigma` as their barycentre.
pub fn population_mc_experiment<T: Scalar>(
    config: &TruncationConfig<T>,
    law: &RandomMapLaw,
    n: usize,
    seed: u64,
    options: &McOptions<T>,
) -> Result<McReport<T>> {
    if n < 2 {
        return Err(BwError::InsufficientSamples { required: 2, got: n });
    }
    law.validate()?;
    let sigma = build_sigma(config)?;
    let dim = config.dim;

    let coefficients: Vec<f64> = (0..n as u64).map(|i| law.draw(seed, i)).collect();
    let mut map_sum = Matrix::zeros(dim, dim);
    let mut inputs = Vec::with_capacity(n);
    for &a in &coefficients {
        let t = shift_map(dim, T::of(a))?;
        map_sum = &map_sum + t.matrix();
        inputs.push(conjugate(&t, &sigma)?);
    }
    let inv_n = T::one() / T::of(n as f64);
    let mean_deviation = (&map_sum.scale(inv_n) - &Matrix::identity(dim)).frobenius_norm();

    let settings = options.solver.unwrap_or_default();
    let problem = BarycentreProblem::uniform(inputs, settings)?;
    let certificate_residual = verify_barycentre_certificate(&sigma, &problem)?;

    let solver = match options.solver {
        Some(_) => {
            let result = barycentre_fixed_point(&problem, None)?;
            Some(McSolverSummary {
                iterations: result.iterations,
                converged: result.converged,
                final_change: result.final_change,
                certificate_residual: result.certificate_residual,
                distance_to_sigma: (result.barycentre.matrix() - sigma.matrix()).frobenius_norm(),
            })
        }
        None => None,
    };

    Ok(McReport {
        n,
        seed,
        coefficient_mean: coefficients.iter().sum::<f64>() / n as f64,
        mean_deviation,
        certificate_residual,
        solver,
    })
}

/// The covariance family `T_i Sigma T_i` for explicit maps.
pub fn conjugate_family<T: Scalar>(maps: &[SymMap<T>], sigma: &CovMatrix<T>) -> Result<Vec<CovMatrix<T>>> {
    maps.iter().map(|t| conjugate(t, sigma)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::construct::build_pair_maps;

    #[test]
    fn draws_are_reproducible_and_in_range() {
        let law = RandomMapLaw::uniform();
        for i in 0..200 {
            let a = law.draw(7, i);
            assert_eq!(a, law.draw(7, i));
            assert!((-0.5..=0.5).contains(&a));
        }
        assert_ne!(law.draw(7, 0), law.draw(8, 0));
        assert_ne!(law.draw(7, 0), law.draw(7, 1));
        let tri = RandomMapLaw::new(CoefficientLaw::Triangular, true).unwrap();
        assert!((0..200).all(|i| tri.draw(3, i).abs() <= 0.5));
    }

    #[test]
    fn zero_two_point_law_gives_identity() {
        let law = RandomMapLaw::new(CoefficientLaw::TwoPoint { magnitude: 0.0 }, false).unwrap();
        let t = random_map_sample::<f64>(&law, 1, 8).unwrap();
        assert_eq!(t.matrix(), &Matrix::identity(8));
        assert!(RandomMapLaw::new(CoefficientLaw::TwoPoint { magnitude: 0.0 }, true).is_err());
        assert!(RandomMapLaw::new(CoefficientLaw::TwoPoint { magnitude: 0.7 }, true).is_err());
    }

    #[test]
    fn half_draw_matches_first_pair_map() {
        let law = RandomMapLaw::new(CoefficientLaw::TwoPoint { magnitude: 0.5 }, true).unwrap();
        let seed = (0..64).find(|&s| law.draw(s, 0) == 0.5).expect("some seed draws +1/2");
        let t = random_map_sample::<f64>(&law, seed, 16).unwrap();
        let (t1, _) = build_pair_maps::<f64>(16).unwrap();
        assert_eq!(t, t1);
    }

    #[test]
    fn antithetic_family_averages_to_identity() {
        let law = RandomMapLaw::new(CoefficientLaw::Antithetic { magnitude: 0.5 }, true).unwrap();
        let config = TruncationConfig::<f64>::geometric(16);
        let report = population_mc_experiment(&config, &law, 6, 0, &McOptions { solver: None }).unwrap();
        assert_eq!(report.mean_deviation, 0.0);
        assert!(report.certificate_residual <= 1e-9);
        assert!(report.solver.is_none());
    }

    #[test]
    fn mc_needs_two_samples() {
        let config = TruncationConfig::<f64>::geometric(8);
        let err = population_mc_experiment(&config, &RandomMapLaw::uniform(), 1, 0, &McOptions::default());
        assert!(matches!(err, Err(BwError::InsufficientSamples { required: 2, got: 1 })));
    }
}
