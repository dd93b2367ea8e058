mod common;

use bwbary::counterexample::*;
use bwbary::error::BwError;
use bwbary::geometry::*;
use bwbary::linalg::*;
use bwbary::matrix::Matrix;
use bwbary::{ExactRecurrence, Rational};
use proptest::prelude::*;

#[test]
fn doubling_shift_layout() {
    let f = doubling_shift::<f64>(4).unwrap();
    let nonzero: Vec<(usize, usize)> =
        (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| f[(i, j)] != 0.0).collect();
    // 1-based (2,1) and (4,2).
    assert_eq!(nonzero, vec![(1, 0), (3, 1)]);
    let f2 = doubling_shift::<f64>(2).unwrap();
    assert_eq!(f2, Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap());
    assert!(doubling_shift::<f64>(1).is_err());
}

#[test]
fn build_t_examples() {
    let t = build_t::<f64>(2, 2.0).unwrap();
    assert_eq!(t.matrix(), &Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap());
    assert!(build_t::<f64>(8, 1.5).is_err());
    assert!(build_t_with::<f64>(8, 1.5, true).is_ok());

    for dim in [8, 16, 33] {
        let s2 = build_t::<f64>(dim, 2.0).unwrap().spectral().unwrap();
        let s3 = build_t::<f64>(dim, 3.0).unwrap().spectral().unwrap();
        for (a, b) in s2.eigenvalues().iter().zip(s3.eigenvalues()) {
            assert!((a + 1.0 - b).abs() < 1e-12);
        }
        assert!(operator_norm(build_t::<f64>(dim, 3.0).unwrap().matrix()).unwrap() <= 5.0 + 1e-12);
    }
}

#[test]
fn pair_maps() {
    let (t1, t2) = build_pair_maps::<f64>(2).unwrap();
    assert_eq!(t1.matrix(), &Matrix::from_rows(&[[1.0, 0.5], [0.5, 1.0]]).unwrap());
    assert_eq!(t2.matrix(), &Matrix::from_rows(&[[1.0, -0.5], [-0.5, 1.0]]).unwrap());
    for dim in [16, 64] {
        let (t1, t2) = build_pair_maps::<f64>(dim).unwrap();
        assert_eq!(t1.matrix() + t2.matrix(), Matrix::identity(dim).scale(2.0));
        let (e1, e2) = (t1.spectral().unwrap(), t2.spectral().unwrap());
        assert!(e1.min_eigenvalue() >= -1e-12 && e2.min_eigenvalue() >= -1e-12);
        for (a, b) in e1.eigenvalues().iter().zip(e2.eigenvalues()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn n_fold_family_averages_to_identity() {
    for n in 2..=7 {
        let a = symmetric_coefficients::<f64>(n).unwrap();
        assert!(a.iter().all(|x| x.abs() <= 0.5));
        let maps = build_family_maps::<f64>(16, &a).unwrap();
        let mut mean = Matrix::zeros(16, 16);
        for m in &maps {
            mean = &mean + &m.matrix().scale(1.0 / n as f64);
        }
        assert!((&mean - &Matrix::identity(16)).max_abs() <= 1e-15, "n={n}");

        let sigma = build_sigma(&TruncationConfig::<f64>::geometric(16)).unwrap();
        let family = conjugate_family(&maps, &sigma).unwrap();
        let p = BarycentreProblem::uniform(family, SolverSettings::default()).unwrap();
        assert!(verify_barycentre_certificate(&sigma, &p).unwrap() <= 1e-9);
    }
    assert!(build_family_maps::<f64>(8, &[0.75, -0.75]).is_err());
}

#[test]
fn sigma_examples() {
    let s = build_sigma(&TruncationConfig::<f64>::geometric(8)).unwrap();
    assert_eq!(s.matrix(), &Matrix::from_diagonal(&[0.0, 0.5, 0.0, 0.25, 0.0, 0.125, 0.0, 0.0625]));
    let list = TruncationConfig::new(4, Decay::List(vec![1.0, 1.0]));
    assert_eq!(build_sigma(&list).unwrap().matrix(), &Matrix::from_diagonal(&[0.0, 1.0, 0.0, 1.0]));
    let s16 = build_sigma(&TruncationConfig::<f64>::geometric(16)).unwrap();
    assert_eq!(kernel_dim(&s16, default_rank_tol()).unwrap(), 8);
    assert!((s16.trace() - (1.0 - 0.5f64.powi(8))).abs() < 1e-15);

    assert!(build_sigma(&TruncationConfig::new(4, Decay::List(vec![1.0]))).is_err());
    assert!(build_sigma(&TruncationConfig::new(4, Decay::Geometric(1.5))).is_err());
    assert!(build_sigma(&TruncationConfig::<f64>::geometric(4).with_kernel_pattern(vec![5])).is_err());
}

#[test]
fn conjugate_examples() {
    let sigma = build_sigma(&TruncationConfig::<f64>::geometric(8)).unwrap();
    assert_eq!(conjugate(&SymMap::identity(8), &sigma).unwrap(), sigma);
    let two = SymMap::new(Matrix::identity(8).scale(2.0)).unwrap();
    assert_eq!(conjugate(&two, &sigma).unwrap().matrix(), &sigma.matrix().scale(4.0));

    let sigma = build_sigma(&TruncationConfig::<f64>::geometric(64)).unwrap();
    let (t1, _) = build_pair_maps::<f64>(64).unwrap();
    let s1 = conjugate(&t1, &sigma).unwrap();
    // tr(T Sigma T) = tr(T^2 Sigma) by cyclicity, evaluated entrywise.
    let t_sq = t1.matrix() * t1.matrix();
    let direct: f64 = (0..64).map(|k| t_sq[(k, k)] * sigma.matrix()[(k, k)]).sum();
    assert!((s1.trace() - direct).abs() < 1e-10);
    assert!(conjugate(&t1, &build_sigma(&TruncationConfig::<f64>::geometric(8)).unwrap()).is_err());
}

#[test]
fn kernel_dims_at_moderate_truncation() {
    let dim = 32;
    let sigma = build_sigma(&TruncationConfig::<f64>::geometric(dim)).unwrap();
    let (t1, t2) = build_pair_maps::<f64>(dim).unwrap();
    let s1 = conjugate(&t1, &sigma).unwrap();
    let s2 = conjugate(&t2, &sigma).unwrap();
    let tol = default_rank_tol::<f64>();
    assert_eq!(kernel_dim(&s1, tol).unwrap(), dim / 2);
    assert_eq!(kernel_dim(&s2, tol).unwrap(), dim / 2);
    assert_eq!(kernel_dim(&s1.scale(4.0).unwrap(), tol).unwrap(), kernel_dim(&s1, tol).unwrap());

    let report = kernel_bookkeeping(&sigma, &[s1, s2], tol).unwrap();
    // Odd k > dim/2 are fixed by both maps, so those directions stay shared.
    assert_eq!(report.shared_directions(0), dim / 4);
    assert!(report.max_angle(0) > 0.5);
}

#[test]
fn truncation_rows() {
    let mut last_min = f64::INFINITY;
    for dim in [8, 16, 32, 64] {
        let row = truncation_row(&TruncationConfig::<f64>::geometric(dim), default_rank_tol()).unwrap();
        assert_eq!(row.kernel_dim_sigma, dim / 2);
        assert!(row.certificate_residual <= 1e-9);
        assert!(row.min_eig_t1 < last_min && row.min_eig_t1 > 0.0);
        last_min = row.min_eig_t1;
    }
}

#[test]
fn recurrence_examples() {
    let p = RecurrenceParams::new(1.0, 0.0, RecurrenceSign::Plus, 5).unwrap();
    assert_eq!(kernel_recurrence_solve(&p), vec![1.0, 0.0, -1.0, 2.0, -3.0, 4.0]);
    assert_eq!(generating_coefficients(&p), vec![1.0, 0.0, -1.0, 2.0, -3.0, 4.0]);
    assert_eq!(closed_form_parts(&p), (-1.0, 2.0));
    assert!(
        matches!(growth_witness(&p), GrowthWitness::LinearGrowth { slope, holds_on_horizon: true, .. } if slope == 1.0)
    );

    let p = RecurrenceParams::new(1.0, 1.0, RecurrenceSign::Minus, 6).unwrap();
    assert_eq!(kernel_recurrence_solve(&p), vec![1.0; 7]);

    let p = RecurrenceParams::new(1.0, -1.0, RecurrenceSign::Plus, 6).unwrap();
    assert_eq!(growth_witness(&p), GrowthWitness::Bounded { magnitude: 1.0 });

    let p = RecurrenceParams::new(2.0, -1.0, RecurrenceSign::Plus, 4).unwrap();
    assert_eq!(closed_form_parts(&p), (-1.0, 3.0));

    let p = RecurrenceParams::new(0.0, 0.0, RecurrenceSign::Minus, 30).unwrap();
    assert!(growth_witness(&p).is_zero());
    assert!(RecurrenceParams::new(1.0, 1.0, RecurrenceSign::Plus, 1).is_err());
}

#[test]
fn integer_seeds_are_exact_to_j_40() {
    for (y0, y1) in [(3i64, -7i64), (-10, 10), (5, 5)] {
        for sign in [RecurrenceSign::Plus, RecurrenceSign::Minus] {
            let exact = kernel_recurrence_solve(&RecurrenceParams::new(y0, y1, sign, 40).unwrap());
            let float = kernel_recurrence_solve(&RecurrenceParams::new(y0 as f64, y1 as f64, sign, 40).unwrap());
            assert!(exact.iter().zip(&float).all(|(&e, &f)| e as f64 == f));
        }
    }
}

#[test]
fn rational_seeds_match_closed_form_exactly() {
    let p: ExactRecurrence =
        RecurrenceParams::new(Rational::new(1, 3), Rational::new(-2, 7), RecurrenceSign::Minus, 30).unwrap();
    assert_eq!(kernel_recurrence_solve(&p), generating_coefficients(&p));
}

#[test]
fn random_map_examples() {
    let zero = RandomMapLaw::new(CoefficientLaw::TwoPoint { magnitude: 0.0 }, false).unwrap();
    assert_eq!(random_map_sample::<f64>(&zero, 3, 8).unwrap(), SymMap::identity(8));
    let (t1, _) = build_pair_maps::<f64>(8).unwrap();
    let anti = RandomMapLaw::new(CoefficientLaw::Antithetic { magnitude: 0.5 }, true).unwrap();
    assert_eq!(random_map_sample::<f64>(&anti, 0, 8).unwrap(), t1);
    assert!(RandomMapLaw::new(CoefficientLaw::TwoPoint { magnitude: 0.7 }, true).is_err());

    let law = RandomMapLaw::uniform();
    assert_eq!(law.draw(9, 4), law.draw(9, 4));
    assert_ne!(law.draw(9, 4), law.draw(9, 5));
}

#[test]
fn uniform_draws_obey_clt_bound() {
    let law = RandomMapLaw::uniform();
    let n = 10_000;
    let mean: f64 = (0..n).map(|i| law.draw(77, i)).sum::<f64>() / n as f64;
    // Entries of the sample mean of T on the two off-diagonals equal mean(a).
    let bound = 3.0 * (1.0 / 12f64.sqrt()) / (n as f64).sqrt();
    assert!(mean.abs() <= bound, "mean {mean:e} bound {bound:e}");
    assert!((0..n).all(|i| law.draw(77, i).abs() <= 0.5));
}

#[test]
fn mc_examples() {
    let config = TruncationConfig::<f64>::geometric(16);
    let anti = RandomMapLaw::new(CoefficientLaw::Antithetic { magnitude: 0.5 }, true).unwrap();
    let r = population_mc_experiment(&config, &anti, 6, 1, &McOptions { solver: None }).unwrap();
    assert_eq!(r.mean_deviation, 0.0);
    assert!(r.certificate_residual <= 1e-9);

    let pair = population_mc_experiment(&config, &anti, 2, 1, &McOptions { solver: None }).unwrap();
    let row = truncation_row(&config, default_rank_tol()).unwrap();
    assert_eq!(pair.certificate_residual, row.certificate_residual);

    assert!(matches!(
        population_mc_experiment(&config, &RandomMapLaw::uniform(), 1, 1, &McOptions::default()),
        Err(BwError::InsufficientSamples { required: 2, got: 1 })
    ));

    let a = population_mc_experiment(&config, &RandomMapLaw::uniform(), 20, 5, &McOptions::default()).unwrap();
    let b = population_mc_experiment(&config, &RandomMapLaw::uniform(), 20, 5, &McOptions::default()).unwrap();
    assert_eq!(a, b);
    let solver = a.solver.unwrap();
    assert!(solver.converged);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_recurrence(y0 in -10.0f64..10.0, y1 in -10.0f64..10.0, plus in any::<bool>()) {
        let sign = if plus { RecurrenceSign::Plus } else { RecurrenceSign::Minus };
        let p = RecurrenceParams::new(y0, y1, sign, 30).unwrap();
        let series = common::recurrence_by_series(y0, y1, if plus { 1.0 } else { -1.0 }, 30);
        for ((r, c), s) in kernel_recurrence_solve(&p).iter().zip(generating_coefficients(&p)).zip(series) {
            prop_assert!((r - c).abs() <= 1e-9);
            prop_assert!((r - s).abs() <= 1e-9);
        }
    }

    #[test]
    fn zero_witness_iff_zero_seed(y0 in -3i64..=3, y1 in -3i64..=3, plus in any::<bool>()) {
        let sign = if plus { RecurrenceSign::Plus } else { RecurrenceSign::Minus };
        let w = growth_witness(&RecurrenceParams::new(y0, y1, sign, 20).unwrap());
        prop_assert_eq!(w.is_zero(), y0 == 0 && y1 == 0);
        if let GrowthWitness::LinearGrowth { holds_on_horizon, .. } = w {
            prop_assert!(holds_on_horizon);
        }
    }

    #[test]
    fn certificate_exact_for_any_geometric_ratio(r in 0.05f64..0.95, log_dim in 3u32..=6) {
        let dim = 1usize << log_dim;
        let config = TruncationConfig::new(dim, Decay::Geometric(r));
        let row = truncation_row(&config, default_rank_tol()).unwrap();
        prop_assert!(row.certificate_residual <= 1e-9);
    }
}
