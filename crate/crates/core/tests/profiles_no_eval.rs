//! Rebuilding profiles must never touch an objective. Kept in its own test
//! binary so the process-wide evaluation counter sees no other test.

use nsdfo::bench::{regenerate_profiles, run_suite, ProblemKey, SuiteSpec};
use nsdfo::problems::total_evaluations;
use nsdfo::solver::{SolverConfig, SolverKind};

#[test]
fn regenerating_profiles_does_not_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SuiteSpec {
        problems: vec![ProblemKey::new("crescent", 2), ProblemKey::new("maxl", 5)],
        solvers: SolverKind::ALL.to_vec(),
        config: SolverConfig::default(),
        taus: vec![1e-1, 1e-3],
        jobs: 1,
    };
    let before_suite = total_evaluations();
    run_suite(&spec, dir.path()).unwrap();
    let after_suite = total_evaluations();
    assert!(after_suite > before_suite);

    regenerate_profiles(dir.path(), &[1e-1, 1e-3, 1e-5]).unwrap();
    assert_eq!(total_evaluations(), after_suite);
}
