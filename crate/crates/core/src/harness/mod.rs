//! Independent checks of the spectral computation: a variational oracle that
//! avoids the SVD code path and seeded property suites with JSON reports.

mod oracle;
mod report;
mod suites;

pub use oracle::{oracle_mu, DEFAULT_MAX_ITERS, DEFAULT_RESTARTS};
pub use report::{Failure, SuiteReport};
pub use suites::{
    perturbed_maximally_entangled, run_dpi_suite, run_extreme_suite, run_oracle_suite,
    run_tensorization_suite, ORACLE_TOL, PERTURBATION_GRID, SUITE_TOL,
};
