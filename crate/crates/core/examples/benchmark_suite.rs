//! A small solver comparison written to a results bundle, then the profiles
//! rebuilt from the stored records alone.
//!
//! ```bash
//! cargo run --release --example benchmark_suite -- /tmp/nsdfo-bundle
//! ```

use std::path::Path;

use nsdfo::bench::{regenerate_profiles, run_suite, ProblemKey, SuiteOutcome, SuiteSpec};
use nsdfo::solver::{SolverConfig, SolverKind};

pub fn spec() -> SuiteSpec {
    SuiteSpec {
        problems: ["crescent", "demymalo", "cb2"]
            .into_iter()
            .map(|name| ProblemKey::new(name, 2))
            .chain([ProblemKey::new("maxl", 6)])
            .collect(),
        solvers: SolverKind::ALL.to_vec(),
        config: SolverConfig::default(),
        taus: vec![1e-1, 1e-3],
        jobs: 2,
    }
}

pub fn run(out: &Path) -> nsdfo::Result<SuiteOutcome> {
    let outcome = run_suite(&spec(), out)?;
    regenerate_profiles(out, &[1e-5])?;
    Ok(outcome)
}

#[allow(dead_code)]
fn main() -> nsdfo::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "nsdfo-bundle".into());
    let outcome = run(Path::new(&out))?;
    println!("{} records, {} failures", outcome.manifest.records.len(), outcome.manifest.failures.len());
    for f in &outcome.profile_files {
        println!("  {}", f.display());
    }
    for c in &outcome.manifest.improvement {
        println!("tau {:e}: fast {:.2} vs base {:.2}", c.tau, c.fast_final, c.base_final);
    }
    Ok(())
}
