//! Derivative-free linesearch with extrapolation.
//!
//! Tries `y + a p` then `y - a p` against the sufficient-decrease test
//! `f(y + a p) <= f(y) - gamma a^2`. If both fail, the two difference
//! quotients are appended to the sample set and the step is zero. On success
//! the sample set is emptied and the step is expanded by `1/delta` for as
//! long as the test keeps holding (and the step stays below `alpha_max`).

use log::debug;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::clustering::{SamplePair, SampleSet};
use crate::error::{Error, Result};
use crate::problems::{EvalCounter, ObjectiveProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSearchConfig {
    pub gamma: f64,
    pub delta: f64,
    pub alpha_max: f64,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        Self {
            gamma: 1e-6,
            delta: 0.5,
            alpha_max: 1e3,
        }
    }
}

impl LineSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) {
            return Err(Error::Config(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta must lie in (0,1), got {}", self.delta)));
        }
        if !(self.alpha_max > 0.0) {
            return Err(Error::Config(format!(
                "alpha_max must be > 0, got {}",
                self.alpha_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LineSearchResult {
    /// Accepted step, 0 on failure.
    pub alpha: f64,
    /// `+p` or `-p`; `p` on failure.
    pub direction: DVector<f64>,
    /// Empty on success, input set plus two failure pairs otherwise.
    pub samples: SampleSet,
    pub evals_used: usize,
    /// `f(y + alpha p+)`, or `f(y)` on failure.
    pub value: f64,
    /// Extrapolation stopped because the next step would exceed `alpha_max`.
    pub cap_hit: bool,
    /// Extrapolation stopped because the evaluation budget ran out.
    pub budget_hit: bool,
}

impl LineSearchResult {
    pub fn succeeded(&self) -> bool {
        self.alpha > 0.0
    }
}

fn probe(
    problem: &ObjectiveProblem,
    counter: &mut EvalCounter,
    y: &DVector<f64>,
    step: f64,
    p: &DVector<f64>,
) -> Result<f64> {
    let x = y + p * step;
    Ok(counter.evaluate(problem, x.as_slice())?)
}

/// One continuous search from `y` (with cached value `fy`) along `p`.
///
/// Evaluations before the first acceptance that hit the budget surface as
/// [`Error::Budget`]; a budget hit during extrapolation returns the step
/// accepted so far with `budget_hit` set.
#[allow(clippy::too_many_arguments)]
pub fn continuous_search(
    alpha_tilde: f64,
    y: &DVector<f64>,
    fy: f64,
    p: &DVector<f64>,
    mut samples: SampleSet,
    cfg: &LineSearchConfig,
    problem: &ObjectiveProblem,
    counter: &mut EvalCounter,
) -> Result<LineSearchResult> {
    if !(alpha_tilde > 0.0) {
        return Err(Error::Precondition(format!(
            "initial step must be positive, got {alpha_tilde}"
        )));
    }
    if y.len() != p.len() {
        return Err(Error::Precondition("direction and point dimensions differ".into()));
    }
    if (p.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "search direction must have unit norm, got {}",
            p.norm()
        )));
    }

    let start = counter.count();
    let mut alpha = alpha_tilde;
    let accepts = |value: f64, step: f64| value <= fy - cfg.gamma * step * step;

    let f_plus = probe(problem, counter, y, alpha, p)?;
    let (direction, mut value) = if accepts(f_plus, alpha) {
        (p.clone(), f_plus)
    } else {
        let minus = -p;
        let f_minus = probe(problem, counter, y, alpha, &minus)?;
        if accepts(f_minus, alpha) {
            (minus, f_minus)
        } else {
            samples.push(SamplePair::new(p.clone(), (f_plus - fy) / alpha));
            samples.push(SamplePair::new(minus, (f_minus - fy) / alpha));
            return Ok(LineSearchResult {
                alpha: 0.0,
                direction: p.clone(),
                samples,
                evals_used: counter.count() - start,
                value: fy,
                cap_hit: false,
                budget_hit: false,
            });
        }
    };

    samples.clear();
    let mut cap_hit = false;
    let mut budget_hit = false;
    loop {
        let beta = alpha / cfg.delta;
        if beta > cfg.alpha_max {
            debug!("extrapolation capped at alpha = {alpha:e}");
            cap_hit = true;
            break;
        }
        match probe(problem, counter, y, beta, &direction) {
            Ok(fb) if accepts(fb, beta) => {
                alpha = beta;
                value = fb;
            }
            Ok(_) => break,
            Err(Error::Budget(_)) => {
                budget_hit = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(LineSearchResult {
        alpha,
        direction,
        samples,
        evals_used: counter.count() - start,
        value,
        cap_hit,
        budget_hit,
    })
}
