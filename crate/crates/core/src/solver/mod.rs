//! Coordinate-search linesearch solvers for nonsmooth black-box problems.
//!
//! Each iteration runs a [`continuous_search`] along every signed coordinate
//! direction. Once all coordinate steps are small (`<= eta`) a further search
//! follows along the next element of a dense direction sequence. The
//! accelerated variant ([`SolverKind::FastCsDfn`]) then clusters the
//! difference quotients gathered by the failed searches at the current point
//! into a generator model, extracts a descent direction from it, and searches
//! along that direction as well. [`SolverKind::CsDfn`] omits the clustering
//! stage.

mod dense;
mod record;

use std::fmt;
use std::str::FromStr;

use log::debug;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::clustering::{KMeansOptions, SampleSet};
use crate::direction::{compute_direction_with, Acceptance, DirectionOptions, DirectionOutcome};
use crate::error::{Error, Result};
use crate::linesearch::{continuous_search, LineSearchConfig, LineSearchResult};
use crate::problems::{EvalCounter, ObjectiveProblem};
use crate::simplex_qp::SpdMetric;

pub use dense::dense_direction;
pub use record::{RunRecord, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolverKind {
    #[serde(rename = "fast-csdfn")]
    FastCsDfn,
    #[serde(rename = "csdfn")]
    CsDfn,
}

impl SolverKind {
    pub const ALL: [SolverKind; 2] = [SolverKind::FastCsDfn, SolverKind::CsDfn];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::FastCsDfn => "fast-csdfn",
            SolverKind::CsDfn => "csdfn",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast-csdfn" => Ok(SolverKind::FastCsDfn),
            "csdfn" => Ok(SolverKind::CsDfn),
            other => Err(Error::UnknownSolver(other.to_owned())),
        }
    }
}

/// How the metric `B_k` of the min-norm subproblem is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricMode {
    #[default]
    Identity,
    /// Diagonal of coordinate second differences, clamped to `[1e-6, 1e6]`.
    DiagonalEstimate,
}

pub const CURVATURE_MIN: f64 = 1e-6;
pub const CURVATURE_MAX: f64 = 1e6;

/// Flat solver configuration; field names double as config-file keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub theta: f64,
    pub eta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub alpha_max: f64,
    /// Initial coordinate step; unset means `max(1, |x0_i|)` per coordinate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha0_coord: Option<f64>,
    pub alpha0_dense: f64,
    /// Clustering residual threshold; unset means `1e-4 max(1, sum s_i^2)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_cluster: Option<f64>,
    pub h_max: usize,
    pub restarts: usize,
    /// Which qualifying cluster model drives the search. The solver stops at
    /// the smallest one by default; the full sweep overfits long sample sets.
    pub acceptance: Acceptance,
    pub seed: u64,
    /// Hard evaluation cap; unset means `budget_per_dim * n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    pub budget_per_dim: usize,
    pub stop_alpha: f64,
    pub metric_mode: MetricMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let ls = LineSearchConfig::default();
        Self {
            theta: 0.5,
            eta: 1e-3,
            gamma: ls.gamma,
            delta: ls.delta,
            alpha_max: ls.alpha_max,
            alpha0_coord: None,
            alpha0_dense: 1.0,
            epsilon_cluster: None,
            h_max: 20,
            restarts: 5,
            acceptance: Acceptance::FirstQualifying,
            seed: 0,
            budget: None,
            budget_per_dim: 20_000,
            stop_alpha: 1e-7,
            metric_mode: MetricMode::default(),
        }
    }
}

impl SolverConfig {
    pub fn linesearch(&self) -> LineSearchConfig {
        LineSearchConfig {
            gamma: self.gamma,
            delta: self.delta,
            alpha_max: self.alpha_max,
        }
    }

    pub fn effective_budget(&self, n: usize) -> usize {
        self.budget.unwrap_or(self.budget_per_dim * n)
    }

    pub fn validate(&self) -> Result<()> {
        self.linesearch().validate()?;
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(what.to_owned()))
            }
        };
        check(self.theta > 0.0 && self.theta < 1.0, "theta must lie in (0,1)")?;
        check(self.eta > 0.0, "eta must be > 0")?;
        check(self.stop_alpha > 0.0, "stop_alpha must be > 0")?;
        check(self.alpha0_dense > 0.0, "alpha0_dense must be > 0")?;
        check(
            self.alpha0_coord.is_none_or(|a| a > 0.0),
            "alpha0_coord must be > 0",
        )?;
        check(
            self.epsilon_cluster.is_none_or(|e| e > 0.0),
            "epsilon_cluster must be > 0",
        )?;
        check(self.h_max >= 1, "h_max must be >= 1")?;
        check(self.restarts >= 1, "restarts must be >= 1")?;
        check(self.budget != Some(0), "budget must be >= 1")?;
        check(self.budget_per_dim >= 1, "budget_per_dim must be >= 1")?;
        Ok(())
    }
}

/// Mutable iteration state.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub x: DVector<f64>,
    pub fx: f64,
    /// `+1` or `-1` per coordinate: the current direction is `sign_i e_i`.
    pub coord_signs: Vec<f64>,
    pub coord_steps: Vec<f64>,
    pub dense_step: f64,
    pub samples: SampleSet,
    pub iteration: usize,
    pub dense_index: usize,
    /// Latest central second difference along each coordinate.
    pub curvature: Vec<Option<f64>>,
}

impl SolverState {
    pub fn new(x0: &[f64], fx0: f64, config: &SolverConfig) -> Self {
        let n = x0.len();
        Self {
            x: DVector::from_column_slice(x0),
            fx: fx0,
            coord_signs: vec![1.0; n],
            coord_steps: x0
                .iter()
                .map(|xi| config.alpha0_coord.unwrap_or_else(|| xi.abs().max(1.0)))
                .collect(),
            dense_step: config.alpha0_dense,
            samples: SampleSet::new(),
            iteration: 0,
            dense_index: 0,
            curvature: vec![None; n],
        }
    }

    pub fn max_step(&self) -> f64 {
        self.coord_steps
            .iter()
            .copied()
            .fold(self.dense_step, f64::max)
    }
}

/// `B_k` for the min-norm subproblem.
pub fn build_metric(state: &SolverState, mode: MetricMode) -> SpdMetric {
    let n = state.x.len();
    match mode {
        MetricMode::Identity => SpdMetric::identity(n),
        MetricMode::DiagonalEstimate => {
            let diag: Vec<f64> = state
                .curvature
                .iter()
                .map(|c| match c {
                    Some(v) if v.is_finite() => v.clamp(CURVATURE_MIN, CURVATURE_MAX),
                    Some(v) if *v == f64::INFINITY => CURVATURE_MAX,
                    Some(_) => CURVATURE_MIN,
                    None => 1.0,
                })
                .collect();
            SpdMetric::diagonal(&diag).expect("clamped diagonal is SPD")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchKind {
    Coordinate(usize),
    Dense,
    Cluster,
}

/// Progress notifications, mainly for instrumentation and tests.
#[derive(Debug)]
pub enum SolverEvent<'a> {
    Search {
        kind: SearchKind,
        iteration: usize,
        y: &'a DVector<f64>,
        fy: f64,
        initial_step: f64,
        result: &'a LineSearchResult,
    },
    Direction {
        iteration: usize,
        outcome: &'a DirectionOutcome,
    },
    Iteration {
        iteration: usize,
        x: &'a DVector<f64>,
        fx: f64,
    },
}

pub fn run_fast_csdfn(problem: &ObjectiveProblem, config: &SolverConfig) -> Result<RunRecord> {
    run_solver(SolverKind::FastCsDfn, problem, config)
}

pub fn run_csdfn(problem: &ObjectiveProblem, config: &SolverConfig) -> Result<RunRecord> {
    run_solver(SolverKind::CsDfn, problem, config)
}

pub fn run_solver(
    kind: SolverKind,
    problem: &ObjectiveProblem,
    config: &SolverConfig,
) -> Result<RunRecord> {
    run_with_observer(kind, problem, config, &mut |_| {})
}

pub fn run_with_observer(
    kind: SolverKind,
    problem: &ObjectiveProblem,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&SolverEvent<'_>),
) -> Result<RunRecord> {
    config.validate()?;
    let n = problem.dim();
    let mut counter = EvalCounter::with_budget(config.effective_budget(n));
    let fx0 = counter.evaluate(problem, problem.start_point())?;
    let mut state = SolverState::new(problem.start_point(), fx0, config);
    let mut run = Run {
        kind,
        problem,
        config,
        ls: config.linesearch(),
        counter: &mut counter,
        observer,
    };

    let reason = loop {
        if state.max_step() <= config.stop_alpha {
            break Termination::StepSize;
        }
        if run.counter.remaining() == Some(0) {
            break Termination::Budget;
        }
        match run.iterate(&mut state) {
            Ok(()) => {}
            Err(Error::Budget(_)) => break Termination::Budget,
            Err(e) => return Err(e),
        }
    };
    debug!(
        "{} on {}: {:?} after {} iterations, {} evals",
        kind,
        problem.name(),
        reason,
        state.iteration,
        counter.count()
    );

    Ok(RunRecord {
        problem: problem.name().to_owned(),
        solver: kind.name().to_owned(),
        n,
        seed: config.seed,
        config: config.clone(),
        history: counter.history().to_vec(),
        final_x: counter.best_point().expect("x0 was evaluated").to_vec(),
        final_f: counter.best_value().expect("x0 was evaluated"),
        reason,
        evals: counter.count(),
        iterations: state.iteration,
    })
}

struct Run<'a, 'o> {
    kind: SolverKind,
    problem: &'a ObjectiveProblem,
    config: &'a SolverConfig,
    ls: LineSearchConfig,
    counter: &'a mut EvalCounter,
    observer: &'a mut (dyn FnMut(&SolverEvent<'_>) + 'o),
}

/// Point reached so far within one iteration.
struct Cursor {
    y: DVector<f64>,
    fy: f64,
}

impl Cursor {
    fn advance(&mut self, res: &LineSearchResult) {
        if res.succeeded() {
            self.y.axpy(res.alpha, &res.direction, 1.0);
            self.fy = res.value;
        }
    }
}

impl Run<'_, '_> {
    fn search(
        &mut self,
        kind: SearchKind,
        iteration: usize,
        cursor: &Cursor,
        step: f64,
        dir: &DVector<f64>,
        samples: SampleSet,
    ) -> Result<LineSearchResult> {
        let res = continuous_search(
            step,
            &cursor.y,
            cursor.fy,
            dir,
            samples,
            &self.ls,
            self.problem,
            self.counter,
        )?;
        (self.observer)(&SolverEvent::Search {
            kind,
            iteration,
            y: &cursor.y,
            fy: cursor.fy,
            initial_step: step,
            result: &res,
        });
        Ok(res)
    }

    /// One outer iteration. On a budget error the state keeps whatever was
    /// accepted before the budget ran out.
    fn iterate(&mut self, state: &mut SolverState) -> Result<()> {
        let n = state.x.len();
        let k = state.iteration;
        let theta = self.config.theta;
        let mut cur = Cursor {
            y: state.x.clone(),
            fy: state.fx,
        };
        let mut samples = std::mem::take(&mut state.samples);
        let mut trigger_level = 0.0f64;

        let outcome = (|| -> Result<()> {
            for i in 0..n {
                let mut dir = DVector::zeros(n);
                dir[i] = state.coord_signs[i];
                let step = state.coord_steps[i];
                let res = self.search(
                    SearchKind::Coordinate(i),
                    k,
                    &cur,
                    step,
                    &dir,
                    std::mem::take(&mut samples),
                )?;
                trigger_level = trigger_level.max(step).max(res.alpha);
                if res.succeeded() {
                    state.coord_steps[i] = res.alpha;
                    state.coord_signs[i] = res.direction[i].signum();
                } else {
                    state.coord_steps[i] = theta * step;
                    let pairs = res.samples.pairs();
                    let (sp, sm) = (pairs[pairs.len() - 2].s, pairs[pairs.len() - 1].s);
                    state.curvature[i] = Some((sp + sm) / step);
                }
                cur.advance(&res);
                samples = res.samples;
                if res.budget_hit {
                    return Err(crate::error::BudgetExhausted.into());
                }
            }

            if trigger_level > self.config.eta {
                return Ok(());
            }

            let dense_dir = dense_direction(state.dense_index, n);
            state.dense_index += 1;
            let dense_step = state.dense_step;
            let res = self.search(
                SearchKind::Dense,
                k,
                &cur,
                dense_step,
                &dense_dir,
                std::mem::take(&mut samples),
            )?;
            state.dense_step = if res.succeeded() { res.alpha } else { theta * dense_step };
            cur.advance(&res);
            samples = res.samples;
            if res.budget_hit {
                return Err(crate::error::BudgetExhausted.into());
            }

            if self.kind == SolverKind::CsDfn {
                return Ok(());
            }
            let metric = build_metric(state, self.config.metric_mode);
            let opts = DirectionOptions {
                epsilon: self.config.epsilon_cluster,
                kmeans: KMeansOptions {
                    h_max: self.config.h_max,
                    restarts: self.config.restarts,
                    seed: self.config.seed.wrapping_add(k as u64),
                },
                acceptance: self.config.acceptance,
            };
            let outcome = compute_direction_with(&samples, &metric, &opts)?;
            (self.observer)(&SolverEvent::Direction {
                iteration: k,
                outcome: &outcome,
            });
            if outcome.found {
                // The cluster search starts from the dense step held at the
                // beginning of the iteration.
                let kept = samples.len();
                let res = self.search(
                    SearchKind::Cluster,
                    k,
                    &cur,
                    dense_step,
                    &outcome.direction,
                    std::mem::take(&mut samples),
                )?;
                cur.advance(&res);
                samples = res.samples;
                // A failed cluster search does not contribute its quotients.
                samples.truncate(kept);
                if res.budget_hit {
                    return Err(crate::error::BudgetExhausted.into());
                }
            }
            Ok(())
        })();

        state.x = cur.y;
        state.fx = cur.fy;
        state.samples = samples;
        state.iteration += 1;
        (self.observer)(&SolverEvent::Iteration {
            iteration: k,
            x: &state.x,
            fx: state.fx,
        });
        outcome
    }
}
