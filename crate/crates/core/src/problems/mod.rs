//! Black-box objectives, evaluation accounting and the test-problem registry.

mod collection;
mod registry;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::BudgetExhausted;

pub use registry::{registry_get, standard_registry, DimRule, ProblemInfo, Registry};

/// Objective signature shared by every registered problem.
pub type ObjectiveFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

static TOTAL_EVALUATIONS: AtomicU64 = AtomicU64::new(0);

/// Process-wide number of counted objective evaluations.
///
/// Used by tests that must show a code path performs no evaluations at all.
pub fn total_evaluations() -> u64 {
    TOTAL_EVALUATIONS.load(Ordering::Relaxed)
}

/// A named objective `f: R^n -> R` together with its literature start point.
#[derive(Clone)]
pub struct ObjectiveProblem {
    name: String,
    start_point: Vec<f64>,
    known_optimum: Option<f64>,
    objective: Arc<ObjectiveFn>,
}

impl ObjectiveProblem {
    pub fn new<F>(
        name: impl Into<String>,
        start_point: Vec<f64>,
        known_optimum: Option<f64>,
        objective: F,
    ) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        assert!(!start_point.is_empty(), "problem dimension must be positive");
        Self {
            name: name.into(),
            start_point,
            known_optimum,
            objective: Arc::new(objective),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.start_point.len()
    }

    pub fn start_point(&self) -> &[f64] {
        &self.start_point
    }

    pub fn known_optimum(&self) -> Option<f64> {
        self.known_optimum
    }

    /// Uncounted evaluation. Solvers must go through [`EvalCounter`].
    ///
    /// # Panics
    /// If `x` does not have `dim()` entries.
    pub fn value(&self, x: &[f64]) -> f64 {
        assert_eq!(
            x.len(),
            self.dim(),
            "dimension mismatch evaluating `{}`",
            self.name
        );
        (self.objective)(x)
    }
}

impl fmt::Debug for ObjectiveProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveProblem")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("known_optimum", &self.known_optimum)
            .finish_non_exhaustive()
    }
}

/// Counts evaluations and keeps the best-so-far trace of one run.
///
/// `history` holds `(eval_index, best_value)` pairs, 1-based, appended on the
/// first evaluation and on every strict improvement.
#[derive(Debug, Clone, Default)]
pub struct EvalCounter {
    count: usize,
    budget: Option<usize>,
    history: Vec<(usize, f64)>,
    best_point: Vec<f64>,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// A counter that refuses evaluations past `budget`.
    pub fn with_budget(budget: usize) -> Self {
        Self {
            budget: Some(budget),
            ..Self::default()
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn remaining(&self) -> Option<usize> {
        self.budget.map(|b| b.saturating_sub(self.count))
    }

    pub fn history(&self) -> &[(usize, f64)] {
        &self.history
    }

    pub fn best_value(&self) -> Option<f64> {
        self.history.last().map(|&(_, f)| f)
    }

    /// Point at which [`best_value`](Self::best_value) was observed.
    pub fn best_point(&self) -> Option<&[f64]> {
        (!self.history.is_empty()).then_some(self.best_point.as_slice())
    }

    pub fn reset(&mut self) {
        self.count = 0;
        self.history.clear();
        self.best_point.clear();
    }

    pub fn evaluate(
        &mut self,
        problem: &ObjectiveProblem,
        x: &[f64],
    ) -> Result<f64, BudgetExhausted> {
        if self.remaining() == Some(0) {
            return Err(BudgetExhausted);
        }
        let value = problem.value(x);
        self.count += 1;
        TOTAL_EVALUATIONS.fetch_add(1, Ordering::Relaxed);
        if self.best_value().is_none_or(|best| value < best) {
            self.history.push((self.count, value));
            self.best_point.clear();
            self.best_point.extend_from_slice(x);
        }
        Ok(value)
    }
}

/// Evaluates `problem` at `x`, charging the evaluation to `counter`.
pub fn evaluate_counted(
    problem: &ObjectiveProblem,
    counter: &mut EvalCounter,
    x: &[f64],
) -> Result<f64, BudgetExhausted> {
    counter.evaluate(problem, x)
}
