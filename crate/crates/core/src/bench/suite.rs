//! Solver x problem grids persisted as a results bundle.
//!
//! Bundle layout:
//!
//! ```text
//! <out>/manifest.json
//! <out>/records/<problem>-n<n>__<solver>.json
//! <out>/perf_tau<tau>.csv  <out>/perf_tau<tau>.svg
//! <out>/data_tau<tau>.csv  <out>/data_tau<tau>.svg
//! ```

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::{cells_csv, format_tau, profile, ProfileKind, ProblemKey, SolveTable};
use super::svg;
use crate::config::config_hash;
use crate::error::{Error, Result};
use crate::problems::registry_get;
use crate::solver::{run_solver, RunRecord, SolverConfig, SolverKind};

pub const STANDARD_TAUS: [f64; 3] = [1e-1, 1e-3, 1e-5];

/// The default ten-problem grid with fixed dimensions.
pub fn core_problems() -> Vec<ProblemKey> {
    [
        ("cb2", 2),
        ("crescent", 2),
        ("demymalo", 2),
        ("shor", 5),
        ("wong1", 7),
        ("maxquad", 10),
        ("maxq", 20),
        ("maxl", 10),
        ("l1hilb", 20),
        ("cb3", 20),
    ]
    .into_iter()
    .map(|(name, n)| ProblemKey::new(name, n))
    .collect()
}

#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub problems: Vec<ProblemKey>,
    pub solvers: Vec<SolverKind>,
    pub config: SolverConfig,
    pub taus: Vec<f64>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

impl SuiteSpec {
    pub fn core(config: SolverConfig) -> Self {
        Self {
            problems: core_problems(),
            solvers: SolverKind::ALL.to_vec(),
            config,
            taus: STANDARD_TAUS.to_vec(),
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub problem: String,
    pub n: usize,
    pub solver: String,
    pub error: String,
}

/// Fast variant vs baseline on the data profile at the final `kappa`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementCheck {
    pub tau: f64,
    pub fast_final: f64,
    pub base_final: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub problems: Vec<GridProblem>,
    pub solvers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridProblem {
    pub name: String,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub grid: Grid,
    pub seed: u64,
    pub config: SolverConfig,
    pub config_hash: String,
    pub taus: Vec<f64>,
    pub records: Vec<String>,
    pub failures: Vec<CellFailure>,
    pub warnings: Vec<String>,
    pub improvement: Vec<ImprovementCheck>,
}

impl Manifest {
    pub fn problem_keys(&self) -> Vec<ProblemKey> {
        self.grid
            .problems
            .iter()
            .map(|p| ProblemKey::new(&p.name, p.n))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub manifest: Manifest,
    pub records: Vec<RunRecord>,
    /// Every CSV and SVG written, in emission order.
    pub profile_files: Vec<PathBuf>,
}

pub fn record_file_name(problem: &str, n: usize, solver: &str) -> String {
    format!("{problem}-n{n}__{solver}.json")
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn run_cell(key: &ProblemKey, kind: SolverKind, config: &SolverConfig) -> Result<RunRecord> {
    let problem = registry_get(&key.name, key.n)?;
    match catch_unwind(AssertUnwindSafe(|| run_solver(kind, &problem, config))) {
        Ok(r) => r,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(Error::Precondition(format!("solver panicked: {msg}")))
        }
    }
}

/// Runs the grid, writes the bundle and the profiles under `out`.
///
/// Failed cells are listed in the manifest and treated as unsolved.
pub fn run_suite(spec: &SuiteSpec, out: &Path) -> Result<SuiteOutcome> {
    spec.config.validate()?;
    for key in &spec.problems {
        registry_get(&key.name, key.n)?;
    }
    let records_dir = out.join("records");
    fs::create_dir_all(&records_dir).map_err(|e| Error::io(&records_dir, e))?;

    let cells: Vec<(ProblemKey, SolverKind)> = spec
        .problems
        .iter()
        .flat_map(|p| spec.solvers.iter().map(move |&s| (p.clone(), s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<RunRecord>> = pool.install(|| {
        cells
            .par_iter()
            .map(|(key, kind)| {
                info!("running {} n={} with {}", key.name, key.n, kind);
                run_cell(key, *kind, &spec.config)
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut record_files = Vec::new();
    let mut failures = Vec::new();
    for ((key, kind), res) in cells.iter().zip(results) {
        match res {
            Ok(rec) => {
                let name = record_file_name(&key.name, key.n, kind.name());
                let path = records_dir.join(&name);
                write(&path, &(rec.to_json()? + "\n"))?;
                record_files.push(format!("records/{name}"));
                records.push(rec);
            }
            Err(e) => {
                warn!("{} n={} with {} failed: {e}", key.name, key.n, kind);
                failures.push(CellFailure {
                    problem: key.name.clone(),
                    n: key.n,
                    solver: kind.name().into(),
                    error: e.to_string(),
                });
            }
        }
    }

    let solvers: Vec<String> = spec.solvers.iter().map(|s| s.name().to_string()).collect();
    let mut warnings: Vec<String> = failures
        .iter()
        .map(|f| format!("run failed: {} n={} {}", f.problem, f.n, f.solver))
        .collect();
    if solvers.len() < 2 {
        warnings.push("single solver: performance ratios are all 1".into());
    }
    let (profile_files, dropped, improvement) =
        emit_profiles(out, &spec.problems, &solvers, &records, &spec.taus)?;
    warnings.extend(dropped);
    for check in improvement.iter().filter(|c| !c.holds) {
        warnings.push(format!(
            "fast-csdfn data profile below csdfn at final kappa for tau={}",
            format_tau(check.tau)
        ));
    }

    let manifest = Manifest {
        grid: Grid {
            problems: spec
                .problems
                .iter()
                .map(|p| GridProblem {
                    name: p.name.clone(),
                    n: p.n,
                })
                .collect(),
            solvers,
        },
        seed: spec.config.seed,
        config: spec.config.clone(),
        config_hash: config_hash(&spec.config),
        taus: spec.taus.clone(),
        records: record_files,
        failures,
        warnings,
        improvement,
    };
    let path = out.join("manifest.json");
    write(&path, &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
    Ok(SuiteOutcome {
        manifest,
        records,
        profile_files,
    })
}

type Emitted = (Vec<PathBuf>, Vec<String>, Vec<ImprovementCheck>);

fn emit_profiles(
    out: &Path,
    problems: &[ProblemKey],
    solvers: &[String],
    records: &[RunRecord],
    taus: &[f64],
) -> Result<Emitted> {
    let mut files = Vec::new();
    let mut dropped = Vec::new();
    let mut improvement = Vec::new();
    for &tau in taus {
        let table = SolveTable::from_grid(problems, solvers, records, tau);
        for (p, row) in table.t.iter().enumerate() {
            if row.iter().all(Option::is_none) {
                dropped.push(format!(
                    "unsolved by all solvers at tau={}: {} n={}",
                    format_tau(tau),
                    table.problems[p].name,
                    table.problems[p].n
                ));
            }
        }
        for kind in [ProfileKind::Performance, ProfileKind::Data] {
            let stem = format!("{}_tau{}", kind.file_stem(), format_tau(tau));
            let curves = profile(kind, &table);
            let csv = out.join(format!("{stem}.csv"));
            write(&csv, &cells_csv(kind, &table))?;
            let plot = out.join(format!("{stem}.svg"));
            write(&plot, &svg::render(kind, tau, &curves))?;
            files.push(csv);
            files.push(plot);
            if kind == ProfileKind::Data {
                let final_of = |name: &str| {
                    curves
                        .iter()
                        .find(|c| c.solver == name)
                        .map(|c| c.final_value())
                };
                if let (Some(fast), Some(base)) = (
                    final_of(SolverKind::FastCsDfn.name()),
                    final_of(SolverKind::CsDfn.name()),
                ) {
                    improvement.push(ImprovementCheck {
                        tau,
                        fast_final: fast,
                        base_final: base,
                        holds: fast >= base,
                    });
                }
            }
        }
    }
    Ok((files, dropped, improvement))
}

/// Loads the manifest and every record it lists.
///
/// Missing or unparsable records are reported together in one
/// [`Error::Bundle`].
pub fn load_bundle(dir: &Path) -> Result<(Manifest, Vec<RunRecord>)> {
    let mpath = dir.join("manifest.json");
    let text = fs::read_to_string(&mpath).map_err(|e| Error::io(&mpath, e))?;
    let manifest: Manifest = serde_json::from_str(&text)?;
    let mut records = Vec::new();
    let mut bad = Vec::new();
    for rel in &manifest.records {
        let path = dir.join(rel);
        match fs::read_to_string(&path)
            .ok()
            .and_then(|t| RunRecord::from_json(&t).ok())
        {
            Some(r) => records.push(r),
            None => bad.push(rel.clone()),
        }
    }
    if !bad.is_empty() {
        return Err(Error::Bundle {
            dir: dir.to_path_buf(),
            files: bad,
        });
    }
    Ok((manifest, records))
}

/// Rewrites CSV and SVG profiles from persisted records only.
///
/// With an empty `taus` the manifest's list is used.
pub fn regenerate_profiles(dir: &Path, taus: &[f64]) -> Result<Vec<PathBuf>> {
    let (manifest, records) = load_bundle(dir)?;
    let taus = if taus.is_empty() {
        manifest.taus.clone()
    } else {
        taus.to_vec()
    };
    let (files, dropped, _) = emit_profiles(
        dir,
        &manifest.problem_keys(),
        &manifest.grid.solvers,
        &records,
        &taus,
    )?;
    for w in dropped {
        warn!("{w}");
    }
    Ok(files)
}
