//! Constructions showing a singular covariance as the exact barycentre of
//! covariances `T_i Sigma T_i`, and the recurrence oracles behind them.

mod construct;
mod kernel;
mod random;
mod recurrence;

pub use construct::{
    build_family_maps, build_pair_maps, build_sigma, build_t, build_t_with, conjugate, doubling_shift, shift_map,
    shift_symmetrization, symmetric_coefficients, Decay, TruncationConfig,
};
pub use kernel::{kernel_bookkeeping, truncation_row, KernelReport, TruncationRow, ANGLE_FLOOR};
pub use random::{
    conjugate_family, population_mc_experiment, random_map_sample, CoefficientLaw, McOptions, McReport,
    McSolverSummary, RandomMapLaw,
};
pub use recurrence::{
    closed_form_parts, generating_coefficients, growth_witness, kernel_recurrence_solve, GrowthWitness,
    RecurrenceParams, RecurrenceSign,
};
