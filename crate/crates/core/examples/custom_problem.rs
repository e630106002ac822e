//! Registering a problem of your own and solving it.
//!
//! ```bash
//! cargo run --example custom_problem
//! ```

use nsdfo::problems::{DimRule, ObjectiveProblem, Registry};
use nsdfo::solver::{run_fast_csdfn, RunRecord, SolverConfig};

/// `sum_i |x_i - i| + max_i |x_i - i|`, minimized at `x_i = i` with value 0.
pub fn shifted_l1(n: usize) -> ObjectiveProblem {
    ObjectiveProblem::new("shifted-l1", vec![0.0; n], Some(0.0), |x| {
        let dev = x.iter().enumerate().map(|(i, v)| (v - i as f64).abs());
        dev.clone().sum::<f64>() + dev.fold(0.0, f64::max)
    })
}

pub fn run() -> nsdfo::Result<RunRecord> {
    let mut registry = Registry::standard();
    registry.register("shifted-l1", DimRule::Scalable { min: 1, default: 6 }, shifted_l1);
    let problem = registry.get_default("shifted-l1")?;
    run_fast_csdfn(&problem, &SolverConfig::default())
}

#[allow(dead_code)]
fn main() -> nsdfo::Result<()> {
    let r = run()?;
    println!("f = {:.3e} after {} evals at {:.4?}", r.final_f, r.evals, r.final_x);
    Ok(())
}
