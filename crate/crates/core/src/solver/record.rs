use serde::{Deserialize, Serialize};

use super::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Every tentative step fell to `stop_alpha` or below.
    StepSize,
    Budget,
}

/// Persisted outcome of one `(problem, solver)` run.
///
/// `history` holds `[evaluation_index, best_value_so_far]` pairs (1-based,
/// strictly decreasing values). `final_x`/`final_f` are the best point
/// evaluated during the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub solver: String,
    pub n: usize,
    pub seed: u64,
    pub config: SolverConfig,
    pub history: Vec<(usize, f64)>,
    pub final_x: Vec<f64>,
    pub final_f: f64,
    pub reason: Termination,
    pub evals: usize,
    pub iterations: usize,
}

impl RunRecord {
    /// `f(x_0)`, the first logged value.
    pub fn initial_value(&self) -> Option<f64> {
        self.history.first().map(|&(_, f)| f)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
