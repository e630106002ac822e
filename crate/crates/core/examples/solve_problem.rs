//! Solve a registry problem with both solvers and compare against the
//! stored optimum.
//!
//! ```bash
//! cargo run --release --example solve_problem -- maxl 10
//! ```

use nsdfo::problems::registry_get;
use nsdfo::solver::{run_solver, RunRecord, SolverConfig, SolverKind};

pub fn run(name: &str, n: usize) -> nsdfo::Result<Vec<RunRecord>> {
    let problem = registry_get(name, n)?;
    let config = SolverConfig::default();
    SolverKind::ALL
        .iter()
        .map(|&kind| run_solver(kind, &problem, &config))
        .collect()
}

#[allow(dead_code)]
fn main() -> nsdfo::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "maxl".into());
    let n = args.next().map(|s| s.parse().expect("dimension")).unwrap_or(10);
    let f_star = registry_get(&name, n)?.known_optimum();
    for r in run(&name, n)? {
        println!(
            "{:>10}: f = {:.8e} after {} evals ({:?}); f* = {:?}",
            r.solver, r.final_f, r.evals, r.reason, f_star
        );
    }
    Ok(())
}
