//! Performance and data profiles from hand-built run records, so every value
//! can be checked by hand.
//!
//! Two solvers on two problems (n = 9) solved after
//!
//! ```text
//!            A    B
//!   p1      10   20
//!   p2      30   15
//! ```
//!
//! evaluations. Ratios are (1, 2) and (2, 1), so `rho_A(1) = rho_B(1) = 1/2`
//! and both reach 1 at 2; in simplex gradients (t / 10) the breakpoints are
//! 1, 3 for A and 2, 1.5 for B.
//!
//! ```bash
//! cargo run --example profile_fixture
//! ```

use nsdfo::bench::{data_profile, performance_profile, ProfileCurve, SolveTable};
use nsdfo::solver::{RunRecord, SolverConfig, Termination};

/// A run that starts at 1 and reaches 0 at evaluation `solved`, or stalls
/// at 0.5 when `solved` is `None`.
pub fn record(problem: &str, solver: &str, n: usize, solved: Option<usize>) -> RunRecord {
    let history = match solved {
        Some(t) => vec![(1, 1.0), (t, 0.0)],
        None => vec![(1, 1.0), (2, 0.5)],
    };
    RunRecord {
        problem: problem.into(),
        solver: solver.into(),
        n,
        seed: 0,
        config: SolverConfig::default(),
        final_f: history.last().unwrap().1,
        final_x: vec![0.0; n],
        history,
        reason: Termination::StepSize,
        evals: 100,
        iterations: 1,
    }
}

pub fn two_by_two() -> Vec<RunRecord> {
    vec![
        record("p1", "A", 9, Some(10)),
        record("p1", "B", 9, Some(20)),
        record("p2", "A", 9, Some(30)),
        record("p2", "B", 9, Some(15)),
    ]
}

/// The 2x2 grid plus a third problem that only A solves (at 40).
pub fn three_by_two() -> Vec<RunRecord> {
    let mut r = two_by_two();
    r.push(record("p3", "A", 9, Some(40)));
    r.push(record("p3", "B", 9, None));
    r
}

pub fn run(records: &[RunRecord], tau: f64) -> (Vec<ProfileCurve>, Vec<ProfileCurve>) {
    let table = SolveTable::from_records(records, tau);
    (performance_profile(&table), data_profile(&table))
}

#[allow(dead_code)]
fn main() {
    for (label, records) in [("2x2", two_by_two()), ("3x2", three_by_two())] {
        let (perf, data) = run(&records, 1e-1);
        println!("{label}");
        for c in &perf {
            println!("  perf {}: rho(1) = {:.4}, rho(2) = {:.4}", c.solver, c.value_at(1.0), c.value_at(2.0));
        }
        for c in &data {
            let at: Vec<String> = [1.0, 1.5, 2.0, 3.0, 4.0]
                .iter()
                .map(|k| format!("d({k}) = {:.4}", c.value_at(*k)))
                .collect();
            println!("  data {}: {}", c.solver, at.join(", "));
        }
    }
}
