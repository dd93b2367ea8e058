use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use bwbary::counterexample::{
    build_pair_maps, build_sigma, build_t, closed_form_parts, conjugate_family, generating_coefficients,
    growth_witness, kernel_bookkeeping, kernel_recurrence_solve, population_mc_experiment, shift_map, truncation_row,
    GrowthWitness, McOptions, RecurrenceParams, RecurrenceSign, TruncationConfig,
};
use bwbary::geometry::{
    barycentre_fixed_point, frechet_functional, verify_barycentre_certificate, BarycentreProblem, SolverSettings,
};
use bwbary::linalg::{default_rank_tol, CovMatrix};
use bwbary::{CovMatrix64, SymMap64};

use crate::args::{BarycentreArgs, ConstructArgs, McArgs, RecurrenceArgs, SignArg, SweepArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::matrix_file::{load_covariance, MatrixFile};
use crate::report::RunReport;

/// Largest dimension at which the default rank tolerance still separates the geometric spectrum.
pub const DEFAULT_TOL_MAX_DIM: usize = 64;

pub const RANK_TOL_ENV: &str = "BW_RANK_TOL";

const RECURRENCE_TOL: f64 = 1e-9;

/// `--rank-tol`, else `BW_RANK_TOL`, else the default; the default is refused above 64 dimensions.
pub fn resolve_rank_tol(flag: Option<f64>, dims: &[usize]) -> CliResult<f64> {
    let explicit = match flag {
        Some(t) => Some(t),
        None => match std::env::var(RANK_TOL_ENV) {
            Ok(s) => {
                Some(s.trim().parse::<f64>().map_err(|e| CliError::Invalid(format!("{RANK_TOL_ENV}={s:?}: {e}")))?)
            }
            Err(_) => None,
        },
    };
    match explicit {
        Some(t) if t.is_finite() && t > 0.0 => Ok(t),
        Some(t) => Err(CliError::Invalid(format!("rank tolerance must be positive and finite, got {t}"))),
        None => match dims.iter().find(|&&d| d > DEFAULT_TOL_MAX_DIM) {
            Some(d) => Err(CliError::Invalid(format!(
                "dim {d} exceeds {DEFAULT_TOL_MAX_DIM}: pass --rank-tol or set {RANK_TOL_ENV}"
            ))),
            None => Ok(default_rank_tol()),
        },
    }
}

fn load_inputs(report: &mut RunReport, paths: &[PathBuf]) -> CliResult<Vec<CovMatrix64>> {
    paths
        .iter()
        .map(|p| {
            report.digest_input(p)?;
            load_covariance(p)
        })
        .collect()
}

fn problem(
    inputs: Vec<CovMatrix64>,
    weights: Option<&[f64]>,
    settings: SolverSettings<f64>,
) -> CliResult<BarycentreProblem<f64>> {
    Ok(match weights {
        Some(w) => BarycentreProblem::new(inputs, w.to_vec(), settings)?,
        None => BarycentreProblem::uniform(inputs, settings)?,
    })
}

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
fn fmt_float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn construct(args: &ConstructArgs, rank_tol: Option<f64>, report: &mut RunReport) -> CliResult<()> {
    let tol = resolve_rank_tol(rank_tol, &[args.dim])?;
    let config = TruncationConfig::new(args.dim, args.decay.clone());
    let sigma = build_sigma(&config)?;

    let (maps, suffixes): (Vec<SymMap64>, Vec<String>) = if let Some(c) = args.c {
        (vec![build_t(args.dim, c)?], vec![String::new()])
    } else if args.pair {
        let (t1, t2) = build_pair_maps(args.dim)?;
        (vec![t1, t2], vec!["1".into(), "2".into()])
    } else {
        let law = args.law.expect("clap enforces one family");
        let n = args.n.unwrap_or(0);
        if n == 0 {
            return Err(CliError::Invalid("--n must be at least 1".into()));
        }
        report.seed = Some(args.seed);
        let coefficients: Vec<f64> = (0..n as u64).map(|i| law.draw(args.seed, i)).collect();
        report.nums("coefficients", &coefficients)?;
        let maps = coefficients.iter().map(|&a| shift_map(args.dim, a)).collect::<Result<_, _>>()?;
        (maps, (1..=n).map(|i| i.to_string()).collect())
    };
    let family = conjugate_family(&maps, &sigma)?;

    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let mut written = vec![];
    let mut save = |name: String, file: MatrixFile| -> CliResult<()> {
        let path = args.out.join(&name);
        file.save(&path)?;
        written.push(path.display().to_string());
        Ok(())
    };
    save("sigma.json".into(), MatrixFile::covariance(&sigma))?;
    for ((t, s), suffix) in maps.iter().zip(&family).zip(&suffixes) {
        save(format!("t{suffix}.json"), MatrixFile::map(t))?;
        save(format!("s{suffix}.json"), MatrixFile::covariance(s))?;
    }
    report.put("files", written);

    let book = kernel_bookkeeping(&sigma, &family, tol)?;
    report.num("rank_tol", tol)?;
    report.put("sigma_kernel_dim", book.sigma_kernel_dim);
    report.put("s_kernel_dims", book.family_kernel_dims.clone());
    let min_angles: Vec<f64> = (0..family.len()).map(|i| book.min_angle(i)).collect();
    report.nums("min_principal_angles", &min_angles)?;
    report.num("sigma_trace", sigma.trace())?;
    report.nums("t_traces", &maps.iter().map(|t| t.matrix().trace()).collect::<Vec<_>>())?;
    report.nums("s_traces", &family.iter().map(CovMatrix::trace).collect::<Vec<_>>())?;
    if maps.len() > 1 {
        let p = BarycentreProblem::uniform(family, SolverSettings::default())?;
        report.num("certificate_residual", verify_barycentre_certificate(&sigma, &p)?)?;
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs, report: &mut RunReport) -> CliResult<()> {
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(CliError::Invalid(format!("--tol must be nonnegative, got {}", args.tol)));
    }
    report.digest_input(&args.candidate)?;
    let candidate = load_covariance(&args.candidate)?;
    let inputs = load_inputs(report, &args.inputs)?;
    let p = problem(inputs, args.weights.as_deref(), SolverSettings::default())?;
    let residual = verify_barycentre_certificate(&candidate, &p)?;
    report.num("residual", residual)?;
    report.display_as("residual", format!("{residual:.2e}"));
    report.num("tol", args.tol)?;
    report.passed = residual <= args.tol;
    Ok(())
}

pub fn barycentre(args: &BarycentreArgs, report: &mut RunReport) -> CliResult<()> {
    let inputs = load_inputs(report, &args.inputs)?;
    let settings =
        SolverSettings { tol: args.tol, max_iter: args.max_iter, ridge: args.ridge, ridge_decay: args.ridge_decay };
    let p = problem(inputs, args.weights.as_deref(), settings)?;
    let init = match &args.init {
        Some(path) => {
            report.digest_input(path)?;
            Some(load_covariance(path)?)
        }
        None => None,
    };
    let result = barycentre_fixed_point(&p, init.as_ref())?;

    report.put("iterations", result.iterations);
    report.put("converged", result.converged);
    report.num("final_change", result.final_change)?;
    report.num("certificate_residual", result.certificate_residual)?;
    report.num("frechet", frechet_functional(&result.barycentre, &p)?)?;
    report.num("trace", result.barycentre.trace())?;
    report.put("monotone", result.is_monotone());
    report.num("max_objective_increase", result.max_objective_increase)?;

    if let Some(path) = &args.out {
        MatrixFile::covariance(&result.barycentre).save(path)?;
        report.put("output", path.display().to_string());
    }
    if let Some(path) = &args.csv {
        let mut csv = String::from("iteration,change,frechet\n");
        for rec in &result.history {
            let _ = writeln!(csv, "{},{},{}", rec.iteration, fmt_float(rec.change), fmt_float(rec.objective));
        }
        write_text(path, &csv)?;
    }
    report.passed = result.converged;
    Ok(())
}

pub fn recurrence(args: &RecurrenceArgs, report: &mut RunReport) -> CliResult<()> {
    if !(args.y0.is_finite() && args.y1.is_finite()) {
        return Err(CliError::Invalid("seeds must be finite".into()));
    }
    let sign = match args.sign {
        SignArg::Plus => RecurrenceSign::Plus,
        SignArg::Minus => RecurrenceSign::Minus,
    };
    let params = RecurrenceParams::new(args.y0, args.y1, sign, args.steps as usize)?;
    let iterated = kernel_recurrence_solve(&params);
    let closed = generating_coefficients(&params);
    let (a, b) = closed_form_parts(&params);

    let mut csv = String::from("j,recurrence,closed_form,abs_diff\n");
    let mut max_diff = 0.0f64;
    for (j, (r, c)) in iterated.iter().zip(&closed).enumerate() {
        let diff = (r - c).abs();
        max_diff = max_diff.max(diff);
        let _ = writeln!(csv, "{j},{},{},{}", fmt_float(*r), fmt_float(*c), fmt_float(diff));
    }
    if let Some(path) = &args.csv {
        write_text(path, &csv)?;
    }

    report.num("a", a)?;
    report.num("b", b)?;
    report.nums("recurrence", &iterated)?;
    report.num("max_abs_diff", max_diff)?;
    match growth_witness(&params) {
        GrowthWitness::Zero => report.put("growth", "zero"),
        GrowthWitness::Bounded { magnitude } => {
            report.put("growth", "bounded");
            report.num("growth_magnitude", magnitude)?;
        }
        GrowthWitness::LinearGrowth { slope, from_index, holds_on_horizon } => {
            report.put("growth", "linear");
            report.num("growth_slope", slope)?;
            report.put("growth_from_index", from_index);
            report.put("growth_holds_on_horizon", holds_on_horizon);
        }
    }
    report.passed = max_diff <= RECURRENCE_TOL;
    Ok(())
}

pub fn mc(args: &McArgs, report: &mut RunReport) -> CliResult<()> {
    let config = TruncationConfig::new(args.dim, args.decay.clone());
    let options = McOptions { solver: (!args.no_solver).then(SolverSettings::default) };
    report.seed = Some(args.seed);
    let r = population_mc_experiment(&config, &args.law, args.n, args.seed, &options)?;

    report.put("n", r.n);
    report.num("coefficient_mean", r.coefficient_mean)?;
    report.num("mean_deviation", r.mean_deviation)?;
    report.num("certificate_residual", r.certificate_residual)?;
    if let Some(s) = &r.solver {
        report.put("solver_iterations", s.iterations);
        report.put("solver_converged", s.converged);
        report.num("solver_final_change", s.final_change)?;
        report.num("solver_certificate_residual", s.certificate_residual)?;
        report.num("solver_distance_to_sigma", s.distance_to_sigma)?;
    }
    if let Some(tol) = args.tol {
        report.num("tol", tol)?;
        report.passed = r.certificate_residual <= tol;
    }
    Ok(())
}

pub const SWEEP_COLUMNS: &str = "dim,rank_tol,kernel_dim_sigma,kernel_dim_s1,kernel_dim_s2,min_eig_t1,min_eig_t2,\
min_angle_s1,min_angle_s2,max_angle_s1,max_angle_s2,shared_s1,shared_s2,certificate_residual";

pub fn sweep(args: &SweepArgs, rank_tol: Option<f64>, report: &mut RunReport) -> CliResult<()> {
    let tol = resolve_rank_tol(rank_tol, &args.dims)?;
    let mut csv = format!("{SWEEP_COLUMNS}\n");
    let mut worst = 0.0f64;
    let mut sigma_kernels = vec![];
    for &dim in &args.dims {
        let row = truncation_row(&TruncationConfig::new(dim, args.decay.clone()), tol)?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.dim,
            fmt_float(row.rank_tol),
            row.kernel_dim_sigma,
            row.kernel_dim_s1,
            row.kernel_dim_s2,
            fmt_float(row.min_eig_t1),
            fmt_float(row.min_eig_t2),
            fmt_float(row.min_angle_s1),
            fmt_float(row.min_angle_s2),
            fmt_float(row.max_angle_s1),
            fmt_float(row.max_angle_s2),
            row.shared_s1,
            row.shared_s2,
            fmt_float(row.certificate_residual)
        );
        worst = worst.max(row.certificate_residual);
        sigma_kernels.push(row.kernel_dim_sigma);
    }
    write_text(&args.out, &csv)?;
    report.num("rank_tol", tol)?;
    report.put("dims", args.dims.clone());
    report.put("sigma_kernel_dims", sigma_kernels);
    report.num("max_certificate_residual", worst)?;
    report.put("output", args.out.display().to_string());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_round_trip() {
        for x in [0.0, 2.0, -3.5, 1.2918528592954734e-16, 1e-45, 0.07612046748871322, 1e300, -1e-5] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_float(1.25e-16), "1.25e-16");
        assert_eq!(fmt_float(2.0), "2");
    }
}
