use std::path::PathBuf;

use bwbary::counterexample::{CoefficientLaw, Decay, RandomMapLaw};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bwbary", version, about = "Bures-Wasserstein barycentre toolkit")]
pub struct Cli {
    /// Report format written to stdout.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,

    /// Relative rank tolerance for kernel dimensions; falls back to BW_RANK_TOL, then 1e-10.
    #[arg(long, global = true)]
    pub rank_tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build Sigma, the maps and the conjugated covariances, and write them as JSON.
    Construct(ConstructArgs),
    /// Evaluate the barycentre certificate of a candidate.
    Verify(VerifyArgs),
    /// Run the fixed-point barycentre solver.
    Barycentre(BarycentreArgs),
    /// Compare the kernel recurrence with its closed form.
    #[command(allow_negative_numbers = true)]
    Recurrence(RecurrenceArgs),
    /// Monte-Carlo experiment with random maps I + a (F + F^T).
    Mc(McArgs),
    /// Truncation study of the pair construction across dimensions.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("family").required(true).args(["c", "pair", "law"]))]
pub struct ConstructArgs {
    #[arg(long, default_value_t = 64)]
    pub dim: usize,

    /// `geometric:<r>` or `list:<v1,v2,...>` (one value per non-kernel direction).
    #[arg(long, default_value = "geometric:0.5", value_parser = parse_decay)]
    pub decay: Decay<f64>,

    /// Single map T = F + F^T + c I.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,

    /// The pair T1 = I + (F + F^T)/2, T2 = I - (F + F^T)/2.
    #[arg(long)]
    pub pair: bool,

    /// Random maps I + a_i (F + F^T) with a_i drawn from this law.
    #[arg(long, value_parser = parse_law, requires = "n")]
    pub law: Option<RandomMapLaw>,

    #[arg(long)]
    pub n: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub candidate: PathBuf,

    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub inputs: Vec<PathBuf>,

    /// Defaults to uniform.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,

    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BarycentreArgs {
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub inputs: Vec<PathBuf>,

    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,

    #[arg(long, default_value_t = 1e-6)]
    pub ridge: f64,

    #[arg(long, default_value_t = 0.5)]
    pub ridge_decay: f64,

    /// Starting covariance; defaults to the Euclidean mean.
    #[arg(long)]
    pub init: Option<PathBuf>,

    /// Where to write the barycentre.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Per-iteration trace: iteration, change, frechet.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
pub struct RecurrenceArgs {
    #[arg(long)]
    pub y0: f64,

    #[arg(long)]
    pub y1: f64,

    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,

    /// Last index J, at most 60.
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(2..=60))]
    pub steps: u64,

    /// Columns: j, recurrence, closed_form, abs_diff.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, default_value_t = 32)]
    pub dim: usize,

    #[arg(long, default_value = "geometric:0.5", value_parser = parse_decay)]
    pub decay: Decay<f64>,

    /// `uniform`, `triangular`, `two-point[:m]` or `antithetic[:m]` (m defaults to 0.5).
    #[arg(long, default_value = "uniform", value_parser = parse_law)]
    pub law: RandomMapLaw,

    #[arg(long)]
    pub n: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Fail (exit 1) when the certificate residual exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Skip the solver run on the empirical problem.
    #[arg(long)]
    pub no_solver: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    pub dims: Vec<usize>,

    #[arg(long, default_value = "geometric:0.5", value_parser = parse_decay)]
    pub decay: Decay<f64>,

    /// CSV with one row per dimension.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn parse_decay(s: &str) -> Result<Decay<f64>, String> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| format!("expected geometric:<r> or list:<v,..>, got {s:?}"))?;
    let number = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("bad number {v:?}: {e}"));
    match kind {
        "geometric" => Ok(Decay::Geometric(number(rest)?)),
        "list" => Ok(Decay::List(rest.split(',').map(number).collect::<Result<_, _>>()?)),
        _ => Err(format!("unknown decay {kind:?}")),
    }
}

pub fn parse_law(s: &str) -> Result<RandomMapLaw, String> {
    let (kind, magnitude) = match s.split_once(':') {
        Some((k, m)) => (k, Some(m.parse::<f64>().map_err(|e| format!("bad magnitude {m:?}: {e}"))?)),
        None => (s, None),
    };
    let law = match (kind, magnitude) {
        ("uniform", None) => CoefficientLaw::Uniform,
        ("triangular", None) => CoefficientLaw::Triangular,
        ("two-point", m) => CoefficientLaw::TwoPoint { magnitude: m.unwrap_or(0.5) },
        ("antithetic", m) => CoefficientLaw::Antithetic { magnitude: m.unwrap_or(0.5) },
        _ => return Err(format!("unknown law {s:?}")),
    };
    let excludes_zero = !matches!(
        law,
        CoefficientLaw::TwoPoint { magnitude } | CoefficientLaw::Antithetic { magnitude } if magnitude == 0.0
    );
    RandomMapLaw::new(law, excludes_zero).map_err(|e| e.to_string())
}
