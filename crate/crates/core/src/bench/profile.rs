//! Performance and data profiles.
//!
//! For a convergence level `tau`, problem `p` counts as solved by solver `s`
//! after `t_ps` evaluations when the best value so far first drops to
//! `f_L + tau (f(x_0) - f_L)`, with `f_L` the best final value over all
//! compared solvers. Then
//!
//! * performance profile: `rho_s(a) = |{p : t_ps / min_i t_pi <= a}| / |P|`;
//! * data profile: `d_s(k) = |{p : t_ps / (n_p + 1) <= k}| / |P|`.
//!
//! Unsolved cells have `t_ps = inf`. Problems solved by nobody are dropped
//! from `P`.

use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use serde::Serialize;

use crate::solver::RunRecord;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceTest {
    pub tau: f64,
    /// `f(x_0)`.
    pub f0: f64,
    /// Best value found by any compared solver.
    pub f_l: f64,
}

impl ConvergenceTest {
    pub fn threshold(&self) -> f64 {
        self.f_l + self.tau * (self.f0 - self.f_l)
    }
}

/// First evaluation count at which `record` meets `test`.
pub fn solved_at(record: &RunRecord, test: &ConvergenceTest) -> Option<usize> {
    let threshold = test.threshold();
    record
        .history
        .iter()
        .find(|&&(_, f)| f <= threshold)
        .map(|&(nf, _)| nf)
}

/// Problem identity inside a grid: name plus dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ProblemKey {
    pub name: String,
    pub n: usize,
}

impl ProblemKey {
    pub fn new(name: impl Into<String>, n: usize) -> Self {
        Self {
            name: name.into(),
            n,
        }
    }
}

/// `t_ps` for every cell of a problem x solver grid at one `tau`.
#[derive(Debug, Clone)]
pub struct SolveTable {
    pub tau: f64,
    pub problems: Vec<ProblemKey>,
    pub solvers: Vec<String>,
    /// `t[p][s]`; `None` when unsolved or when the run is missing.
    pub t: Vec<Vec<Option<usize>>>,
    /// Largest evaluation budget seen for each problem.
    pub budgets: Vec<usize>,
}

impl SolveTable {
    /// Grid taken from the records themselves.
    pub fn from_records(records: &[RunRecord], tau: f64) -> Self {
        let problems: BTreeSet<ProblemKey> = records
            .iter()
            .map(|r| ProblemKey::new(&r.problem, r.n))
            .collect();
        let solvers: BTreeSet<String> = records.iter().map(|r| r.solver.clone()).collect();
        Self::from_grid(
            &problems.into_iter().collect::<Vec<_>>(),
            &solvers.into_iter().collect::<Vec<_>>(),
            records,
            tau,
        )
    }

    /// Explicit grid; cells without a record are unsolved.
    pub fn from_grid(
        problems: &[ProblemKey],
        solvers: &[String],
        records: &[RunRecord],
        tau: f64,
    ) -> Self {
        let mut by_cell: BTreeMap<(ProblemKey, &str), &RunRecord> = BTreeMap::new();
        for r in records {
            by_cell.insert((ProblemKey::new(&r.problem, r.n), r.solver.as_str()), r);
        }
        let mut t = Vec::with_capacity(problems.len());
        let mut budgets = Vec::with_capacity(problems.len());
        for key in problems {
            let cells: Vec<Option<&RunRecord>> = solvers
                .iter()
                .map(|s| by_cell.get(&(key.clone(), s.as_str())).copied())
                .collect();
            let f_l = cells
                .iter()
                .flatten()
                .map(|r| r.final_f)
                .fold(f64::INFINITY, f64::min);
            let row = cells
                .iter()
                .map(|cell| {
                    let r = (*cell)?;
                    let test = ConvergenceTest {
                        tau,
                        f0: r.initial_value()?,
                        f_l,
                    };
                    solved_at(r, &test)
                })
                .collect();
            t.push(row);
            budgets.push(
                cells
                    .iter()
                    .flatten()
                    .map(|r| r.config.effective_budget(r.n))
                    .max()
                    .unwrap_or(0),
            );
        }
        Self {
            tau,
            problems: problems.to_vec(),
            solvers: solvers.to_vec(),
            t,
            budgets,
        }
    }

    /// Indices of problems solved by at least one solver.
    pub fn counted_problems(&self) -> Vec<usize> {
        let mut keep = Vec::new();
        for (p, row) in self.t.iter().enumerate() {
            if row.iter().any(Option::is_some) {
                keep.push(p);
            } else {
                warn!(
                    "problem {} (n={}) unsolved by every solver at tau={:e}; dropped from profiles",
                    self.problems[p].name, self.problems[p].n, self.tau
                );
            }
        }
        keep
    }

    /// `r_ps`, infinite when unsolved.
    pub fn ratio(&self, p: usize, s: usize) -> f64 {
        let best = self.t[p].iter().flatten().min();
        match (self.t[p][s], best) {
            (Some(t), Some(&b)) => t as f64 / b as f64,
            _ => f64::INFINITY,
        }
    }

    /// `t_ps / (n_p + 1)`, infinite when unsolved.
    pub fn simplex_gradients(&self, p: usize, s: usize) -> f64 {
        match self.t[p][s] {
            Some(t) => t as f64 / (self.problems[p].n + 1) as f64,
            None => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Performance,
    Data,
}

impl ProfileKind {
    pub fn file_stem(self) -> &'static str {
        match self {
            ProfileKind::Performance => "perf",
            ProfileKind::Data => "data",
        }
    }
}

/// A step function sampled on an abscissa grid that includes every
/// breakpoint, so `ordinates` are exact at those points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub solver: String,
    pub abscissae: Vec<f64>,
    pub ordinates: Vec<f64>,
    /// Per-problem measure (ratio or simplex gradients), `inf` if unsolved.
    measures: Vec<f64>,
}

impl ProfileCurve {
    fn new(solver: String, measures: Vec<f64>, abscissae: Vec<f64>) -> Self {
        let mut curve = Self {
            solver,
            abscissae,
            ordinates: Vec::new(),
            measures,
        };
        curve.ordinates = curve.abscissae.iter().map(|&x| curve.value_at(x)).collect();
        curve
    }

    /// Fraction of counted problems whose measure is `<= x`.
    pub fn value_at(&self, x: f64) -> f64 {
        if self.measures.is_empty() {
            return 0.0;
        }
        let hits = self.measures.iter().filter(|&&m| m <= x).count();
        hits as f64 / self.measures.len() as f64
    }

    pub fn final_value(&self) -> f64 {
        self.ordinates.last().copied().unwrap_or(0.0)
    }
}

fn grid_with_breakpoints(mut base: Vec<f64>, measures: &[Vec<f64>]) -> Vec<f64> {
    base.extend(measures.iter().flatten().copied().filter(|m| m.is_finite()));
    base.sort_by(f64::total_cmp);
    base.dedup();
    base
}

const GRID_POINTS: usize = 64;

pub fn performance_profile(table: &SolveTable) -> Vec<ProfileCurve> {
    if table.solvers.len() < 2 {
        warn!("performance profile with a single solver: every ratio is 1");
    }
    let keep = table.counted_problems();
    let measures: Vec<Vec<f64>> = (0..table.solvers.len())
        .map(|s| keep.iter().map(|&p| table.ratio(p, s)).collect())
        .collect();
    let max_ratio = measures
        .iter()
        .flatten()
        .copied()
        .filter(|m| m.is_finite())
        .fold(1.0, f64::max);
    let base: Vec<f64> = (0..GRID_POINTS)
        .map(|i| max_ratio.powf(i as f64 / (GRID_POINTS - 1) as f64))
        .collect();
    let grid = grid_with_breakpoints(base, &measures);
    table
        .solvers
        .iter()
        .zip(measures)
        .map(|(s, m)| ProfileCurve::new(s.clone(), m, grid.clone()))
        .collect()
}

pub fn data_profile(table: &SolveTable) -> Vec<ProfileCurve> {
    let keep = table.counted_problems();
    let measures: Vec<Vec<f64>> = (0..table.solvers.len())
        .map(|s| keep.iter().map(|&p| table.simplex_gradients(p, s)).collect())
        .collect();
    let kappa_max = keep
        .iter()
        .map(|&p| table.budgets[p] as f64 / (table.problems[p].n + 1) as f64)
        .chain(measures.iter().flatten().copied().filter(|m| m.is_finite()))
        .fold(0.0, f64::max);
    let base: Vec<f64> = (0..GRID_POINTS)
        .map(|i| kappa_max * i as f64 / (GRID_POINTS - 1) as f64)
        .collect();
    let grid = grid_with_breakpoints(base, &measures);
    table
        .solvers
        .iter()
        .zip(measures)
        .map(|(s, m)| ProfileCurve::new(s.clone(), m, grid.clone()))
        .collect()
}

pub fn profile(kind: ProfileKind, table: &SolveTable) -> Vec<ProfileCurve> {
    match kind {
        ProfileKind::Performance => performance_profile(table),
        ProfileKind::Data => data_profile(table),
    }
}

/// `problem,solver,n,tau,t_ps,ratio` rows in grid order. `ratio` is `r_ps`
/// for the performance kind and `t_ps / (n_p + 1)` for the data kind.
pub fn cells_csv(kind: ProfileKind, table: &SolveTable) -> String {
    let mut out = String::from("problem,solver,n,tau,t_ps,ratio\n");
    for (p, key) in table.problems.iter().enumerate() {
        for (s, solver) in table.solvers.iter().enumerate() {
            let t = table.t[p][s].map(|t| t.to_string()).unwrap_or_default();
            let ratio = match kind {
                ProfileKind::Performance => table.ratio(p, s),
                ProfileKind::Data => table.simplex_gradients(p, s),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                key.name,
                solver,
                key.n,
                format_tau(table.tau),
                t,
                ratio
            ));
        }
    }
    out
}

/// `1e-1`, `1e-3`, ...
pub fn format_tau(tau: f64) -> String {
    format!("{tau:e}")
}
