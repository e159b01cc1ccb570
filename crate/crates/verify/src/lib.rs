//! Bounds, parameter sweeps, the identity suite and report writing behind
//! the `klsp4` command.

mod bounds;
mod checks;
pub mod cli;
mod error;
mod katz;
mod phase;
mod sweep;

pub use bounds::{bound_value, ratio, BoundId, BoundValue, CharacterOrders};
pub use checks::{
    auxiliary_agreement, factorization, oracle_equivalence, orbit_identity, reductions,
    run_all_identity_checks, scaling, swap_symmetry, trivial_bound, weil, CheckName, CheckOutcome,
    Fault, IdentityGrid, IdentitySummary,
};
pub use error::{HarnessError, Result};
pub use katz::{character_form, katz_ratio_report, KatzEntry, KatzReport};
pub use phase::{
    critical_points, hessian_rank, phase_sum, stationary_phase_report, StationaryPhaseRecord,
};
pub use sweep::{
    budget_from_env, budgeted_terms, compute, parse_budget, sweep, sweep_to_files, work_estimate,
    CellKey, CellRange, MaxRatio, ReportRow, SkippedCell, SweepConfig, SweepReport, CSV_HEADER,
    DEFAULT_TERM_BUDGET,
};

#[cfg(test)]
mod tests;
