//! One linesearch with extrapolation, and one that fails and leaves two
//! difference quotients behind.
//!
//! ```bash
//! cargo run --example continuous_search
//! ```

use nalgebra::DVector;
use nsdfo::clustering::SampleSet;
use nsdfo::linesearch::{continuous_search, LineSearchConfig, LineSearchResult};
use nsdfo::problems::{registry_get, EvalCounter};

pub fn run() -> nsdfo::Result<(LineSearchResult, LineSearchResult)> {
    let maxl = registry_get("maxl", 3)?;
    let cfg = LineSearchConfig::default();
    let mut counter = EvalCounter::new();

    // From (4, 0, 0) toward the origin: accepted, then doubled while it helps.
    let y = DVector::from_vec(vec![4.0, 0.0, 0.0]);
    let fy = counter.evaluate(&maxl, y.as_slice())?;
    let p = DVector::from_vec(vec![1.0, 0.0, 0.0]);
    let moved = continuous_search(0.25, &y, fy, &p, SampleSet::new(), &cfg, &maxl, &mut counter)?;

    // At the kink (1, 1, 1) neither e_1 nor -e_1 decreases maxl.
    let kink = DVector::from_element(3, 1.0);
    let fk = counter.evaluate(&maxl, kink.as_slice())?;
    let stuck = continuous_search(0.5, &kink, fk, &p, SampleSet::new(), &cfg, &maxl, &mut counter)?;
    Ok((moved, stuck))
}

#[allow(dead_code)]
fn main() -> nsdfo::Result<()> {
    let (moved, stuck) = run()?;
    println!("accepted step {} along {:?} ({} evals), f = {}", moved.alpha, moved.direction.as_slice(), moved.evals_used, moved.value);
    println!("failed search: alpha = {}, quotients:", stuck.alpha);
    for pair in &stuck.samples {
        println!("    d = {:?}, s = {}", pair.d.as_slice(), pair.s);
    }
    Ok(())
}
