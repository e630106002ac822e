//! The `maxl` kink at `x = e`: no signed coordinate direction descends, but
//! clustering the 2n failed-search quotients recovers the generators `e_j`
//! and the min-norm point of their hull gives the descent direction `-e/sqrt(n)`.
//!
//! ```bash
//! cargo run --example golden_direction
//! ```

use nalgebra::DVector;
use nsdfo::clustering::{SamplePair, SampleSet};
use nsdfo::direction::{compute_direction, DirectionOutcome};
use nsdfo::problems::registry_get;
use nsdfo::simplex_qp::SpdMetric;

pub const N: usize = 5;

/// `{(e_i, 1)} U {(-e_i, 0)}`: the quotients of `maxl` at `e` along `+-e_i`.
pub fn golden_samples(n: usize) -> SampleSet {
    let unit = |i: usize, sign: f64| DVector::from_fn(n, |k, _| if k == i { sign } else { 0.0 });
    let up = (0..n).map(|i| SamplePair::new(unit(i, 1.0), 1.0));
    let down = (0..n).map(|i| SamplePair::new(unit(i, -1.0), 0.0));
    SampleSet::from_pairs(up.chain(down))
}

pub struct Golden {
    pub outcome: DirectionOutcome,
    pub f_at_kink: f64,
    pub f_after_step: f64,
}

pub fn run() -> nsdfo::Result<Golden> {
    let samples = golden_samples(N);
    let outcome = compute_direction(&samples, &SpdMetric::identity(N), 1e-10, 20, 0)?;

    let maxl = registry_get("maxl", N)?;
    let kink = DVector::from_element(N, 1.0);
    let trial = &kink + &outcome.direction * 0.1;
    Ok(Golden {
        f_at_kink: maxl.value(kink.as_slice()),
        f_after_step: maxl.value(trial.as_slice()),
        outcome,
    })
}

#[allow(dead_code)]
fn main() -> nsdfo::Result<()> {
    let g = run()?;
    let xi = g.outcome.xi_star.as_ref().expect("direction found");
    println!("clusters used: {}", g.outcome.p_used);
    println!("weights:       {:.6?}", xi.weights.as_slice());
    println!("min-norm point {:.6?}", xi.point.as_slice());
    println!("direction      {:.6?}", g.outcome.direction.as_slice());
    println!("maxl: {} -> {:.6} after a step of 0.1", g.f_at_kink, g.f_after_step);
    Ok(())
}
