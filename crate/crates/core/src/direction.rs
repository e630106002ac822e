//! Search direction from an estimated polyhedral subdifferential.
//!
//! For `p = 2..=min(r, n)` the samples are clustered into `p` generators; a
//! model is accepted when its total residual is below `epsilon`. The
//! minimum-norm point `xi*` of the accepted generators' hull (in the `B^{-1}`
//! metric) gives the direction `-B^{-1} xi*`, normalized to unit length.
//!
//! Every `p` in the sweep is tried and the largest accepted `p` wins
//! ([`Acceptance::LastQualifying`]); [`Acceptance::FirstQualifying`] stops at
//! the smallest accepted model instead.

use log::debug;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::clustering::{kmeans_directional_with, KMeansOptions, SampleSet};
use crate::error::{Error, Result};
use crate::simplex_qp::{min_norm_point, GeneratorSet, MinNormResult, SpdMetric, DEFAULT_TOL};

/// Below this `|xi*|` the hull is taken to contain the origin.
pub const STATIONARITY_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Acceptance {
    #[default]
    LastQualifying,
    FirstQualifying,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DirectionOptions {
    /// Residual threshold; `None` uses [`default_epsilon`].
    pub epsilon: Option<f64>,
    pub kmeans: KMeansOptions,
    pub acceptance: Acceptance,
}

/// `1e-4 * max(1, sum_i s_i^2)`.
pub fn default_epsilon(samples: &SampleSet) -> f64 {
    1e-4 * samples.energy().max(1.0)
}

#[derive(Debug, Clone)]
pub struct DirectionOutcome {
    pub found: bool,
    /// Unit vector when `found`, zero otherwise.
    pub direction: DVector<f64>,
    pub xi_star: Option<MinNormResult>,
    /// Cluster count of the accepted model, 0 if none was accepted.
    pub p_used: usize,
    /// Residual of the accepted model, or the smallest residual seen.
    pub total_residual: f64,
    /// Hull generators of the accepted model (empty clusters dropped).
    pub generators: Vec<DVector<f64>>,
}

impl DirectionOutcome {
    fn not_found(n: usize, total_residual: f64) -> Self {
        Self {
            found: false,
            direction: DVector::zeros(n),
            xi_star: None,
            p_used: 0,
            total_residual,
            generators: Vec::new(),
        }
    }
}

pub fn compute_direction(
    samples: &SampleSet,
    metric: &SpdMetric,
    epsilon: f64,
    h_max: usize,
    seed: u64,
) -> Result<DirectionOutcome> {
    compute_direction_with(
        samples,
        metric,
        &DirectionOptions {
            epsilon: Some(epsilon),
            kmeans: KMeansOptions {
                h_max,
                seed,
                ..KMeansOptions::default()
            },
            ..DirectionOptions::default()
        },
    )
}

pub fn compute_direction_with(
    samples: &SampleSet,
    metric: &SpdMetric,
    opts: &DirectionOptions,
) -> Result<DirectionOutcome> {
    let n = metric.dim();
    if let Some(d) = samples.dim() {
        if d != n {
            return Err(Error::Precondition(format!(
                "samples live in R^{d} but the metric is {n}x{n}"
            )));
        }
    }
    let epsilon = opts.epsilon.unwrap_or_else(|| default_epsilon(samples));
    if !(epsilon > 0.0) {
        return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
    }

    let mut accepted = None;
    let mut best_seen = f64::INFINITY;
    for p in 2..=samples.len().min(n) {
        let model = kmeans_directional_with(samples, p, &opts.kmeans)?;
        best_seen = best_seen.min(model.total_residual);
        if model.total_residual < epsilon {
            accepted = Some((p, model));
            if opts.acceptance == Acceptance::FirstQualifying {
                break;
            }
        }
    }
    let Some((p_used, model)) = accepted else {
        return Ok(DirectionOutcome::not_found(n, best_seen));
    };

    let hull = model.supported_generators();
    let gens = GeneratorSet::new(hull.clone())?;
    let scale = hull
        .iter()
        .map(|v| metric.inv_inner(v, v))
        .fold(1.0, f64::max);
    let xi = match min_norm_point(&gens, metric, DEFAULT_TOL * scale) {
        Ok(xi) => xi,
        Err(Error::QpNotConverged { residual }) => {
            debug!("min-norm subproblem stalled at residual {residual:e}");
            return Ok(DirectionOutcome::not_found(n, model.total_residual));
        }
        Err(e) => return Err(e),
    };

    let mut outcome = DirectionOutcome {
        found: false,
        direction: DVector::zeros(n),
        xi_star: None,
        p_used,
        total_residual: model.total_residual,
        generators: hull,
    };
    if xi.point.norm() > STATIONARITY_GUARD {
        let scaled = metric.solve(&xi.point);
        let norm = scaled.norm();
        if norm > 0.0 && norm.is_finite() {
            outcome.found = true;
            outcome.direction = -scaled / norm;
        }
    }
    outcome.xi_star = Some(xi);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::SamplePair;

    fn e(n: usize, i: usize, sign: f64) -> DVector<f64> {
        DVector::from_fn(n, |k, _| if k == i { sign } else { 0.0 })
    }

    #[test]
    fn too_few_samples() {
        let g = SampleSet::from_pairs([SamplePair::new(e(3, 0, 1.0), 1.0)]);
        let out = compute_direction(&g, &SpdMetric::identity(3), 1e-6, 20, 0).unwrap();
        assert!(!out.found);
        assert_eq!(out.direction, DVector::zeros(3));
    }

    #[test]
    fn straddling_generators_signal_stationarity() {
        let g = SampleSet::from_pairs([
            SamplePair::new(e(2, 0, 1.0), 1.0),
            SamplePair::new(e(2, 0, -1.0), 1.0),
        ]);
        let out = compute_direction(&g, &SpdMetric::identity(2), 1e-6, 20, 0).unwrap();
        assert!(!out.found);
        assert_eq!(out.p_used, 2);
        let xi = out.xi_star.unwrap();
        assert!(xi.point.norm() <= STATIONARITY_GUARD);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = SampleSet::from_pairs([SamplePair::new(e(3, 0, 1.0), 1.0)]);
        assert!(compute_direction(&g, &SpdMetric::identity(2), 1e-6, 20, 0).is_err());
    }

    #[test]
    fn default_epsilon_scales_with_energy() {
        let g = SampleSet::from_pairs([
            SamplePair::new(e(2, 0, 1.0), 30.0),
            SamplePair::new(e(2, 1, 1.0), 40.0),
        ]);
        assert_eq!(default_epsilon(&g), 1e-4 * 2500.0);
        assert_eq!(default_epsilon(&SampleSet::new()), 1e-4);
    }
}
