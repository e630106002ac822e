//! Benchmark harness: solver grids, convergence test, performance and data
//! profiles, CSV/SVG output.

pub mod profile;
pub mod suite;
pub mod svg;

pub use profile::{
    cells_csv, data_profile, format_tau, performance_profile, solved_at, ConvergenceTest,
    ProblemKey, ProfileCurve, ProfileKind, SolveTable,
};
pub use suite::{
    core_problems, load_bundle, regenerate_profiles, run_suite, CellFailure, ImprovementCheck,
    Manifest, SuiteOutcome, SuiteSpec, STANDARD_TAUS,
};
