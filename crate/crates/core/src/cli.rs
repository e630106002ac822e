//! Command-line front end: `solve`, `bench`, `profiles`, `problems list`.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error. The output
//! directory comes from `--out`, else `NSDFO_OUT`, else `nsdfo-out`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, format_tau, ProblemKey, SuiteSpec};
use crate::config::load_config;
use crate::error::{Error, Result};
use crate::problems::standard_registry;
use crate::solver::{run_solver, SolverConfig, SolverKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nsdfo", version, about = "Derivative-free nonsmooth minimization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one solver on one problem and write its record.
    Solve(SolveArgs),
    /// Run a solver x problem grid and write a results bundle with profiles.
    Bench(BenchArgs),
    /// Recompute profiles from a stored bundle without running any solver.
    Profiles(ProfilesArgs),
    /// Inspect the problem registry.
    #[command(subcommand)]
    Problems(ProblemsCommand),
}

#[derive(Debug, Subcommand)]
pub enum ProblemsCommand {
    /// One JSON object per line: name, default dimension, f*, dimension rule.
    List,
}

#[derive(Debug, Clone, Args)]
pub struct RunOptions {
    /// Flat TOML file with solver settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, env = "NSDFO_OUT", default_value = "nsdfo-out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Maximum number of function evaluations per run.
    #[arg(long)]
    pub budget: Option<usize>,
}

impl RunOptions {
    /// File values first, then flag overrides.
    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => SolverConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(budget) = self.budget {
            cfg.budget = Some(budget);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: String,
    /// Defaults to the problem's table dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value = "fast-csdfn")]
    pub solver: SolverKind,
    #[command(flatten)]
    pub run: RunOptions,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// `name` or `name:n`; repeatable. Defaults to the core ten-problem set.
    #[arg(long = "problem")]
    pub problems: Vec<String>,
    /// Overrides the dimension of every scalable problem given by bare name.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Repeatable; defaults to both solvers.
    #[arg(long = "solver")]
    pub solvers: Vec<SolverKind>,
    /// Repeatable; defaults to 1e-1, 1e-3, 1e-5.
    #[arg(long = "tau")]
    pub taus: Vec<f64>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[command(flatten)]
    pub run: RunOptions,
}

#[derive(Debug, Clone, Args)]
pub struct ProfilesArgs {
    /// Bundle directory.
    #[arg(long, env = "NSDFO_OUT", default_value = "nsdfo-out")]
    pub out: PathBuf,
    /// Repeatable; defaults to the bundle's list.
    #[arg(long = "tau")]
    pub taus: Vec<f64>,
}

/// Parses `args` (program name first), runs, and maps the outcome to an
/// exit code. Messages go to `stdout` and `stderr`.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownProblem { .. }
        | Error::InvalidDimension { .. }
        | Error::UnknownSolver(_)
        | Error::Config(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
        Command::Profiles(a) => cmd_profiles(a, stdout),
        Command::Problems(ProblemsCommand::List) => cmd_problems_list(stdout),
    }
}

fn say(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let registry = standard_registry();
    let dim = match args.dim {
        Some(d) => d,
        None => registry.dim_rule(&args.problem)?.default_dim(),
    };
    let problem = registry.get(&args.problem, dim)?;
    let cfg = args.run.solver_config()?;
    let record = run_solver(args.solver, &problem, &cfg)?;
    create_dir(&args.run.out)?;
    let path = args
        .run
        .out
        .join(bench::suite::record_file_name(&args.problem, dim, args.solver.name()));
    fs::write(&path, record.to_json()? + "\n").map_err(|e| Error::io(&path, e))?;
    say(
        stdout,
        format_args!(
            "final_f = {:e}\nevals = {}\nreason = {}\nrecord = {}",
            record.final_f,
            record.evals,
            serde_json::to_value(record.reason)?
                .as_str()
                .unwrap_or_default(),
            path.display()
        ),
    )
}

fn parse_problem(spec: &str, dim: Option<usize>) -> Result<ProblemKey> {
    let registry = standard_registry();
    let (name, n) = match spec.split_once(':') {
        Some((name, n)) => {
            let n = n
                .parse()
                .map_err(|_| Error::Config(format!("bad dimension in `{spec}`")))?;
            (name, n)
        }
        None => {
            let rule = registry.dim_rule(spec)?;
            let core = bench::core_problems()
                .into_iter()
                .find(|k| k.name == spec)
                .map(|k| k.n);
            let n = match (rule, dim) {
                (crate::problems::DimRule::Scalable { .. }, Some(d)) => d,
                _ => core.unwrap_or(rule.default_dim()),
            };
            (spec, n)
        }
    };
    registry.get(name, n)?;
    Ok(ProblemKey::new(name, n))
}

pub fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = args.run.solver_config()?;
    let problems = if args.problems.is_empty() {
        bench::core_problems()
    } else {
        args.problems
            .iter()
            .map(|p| parse_problem(p, args.dim))
            .collect::<Result<_>>()?
    };
    let spec = SuiteSpec {
        problems,
        solvers: if args.solvers.is_empty() {
            SolverKind::ALL.to_vec()
        } else {
            args.solvers.clone()
        },
        config,
        taus: if args.taus.is_empty() {
            bench::STANDARD_TAUS.to_vec()
        } else {
            args.taus.clone()
        },
        jobs: args.jobs,
    };
    validate_taus(&spec.taus)?;
    let outcome = bench::run_suite(&spec, &args.run.out)?;
    let m = &outcome.manifest;
    say(
        stdout,
        format_args!(
            "records = {}\nfailures = {}\nwarnings = {}\nbundle = {}",
            m.records.len(),
            m.failures.len(),
            m.warnings.len(),
            args.run.out.display()
        ),
    )?;
    for check in &m.improvement {
        say(
            stdout,
            format_args!(
                "tau = {}: fast-csdfn {:.3} vs csdfn {:.3} at final kappa{}",
                format_tau(check.tau),
                check.fast_final,
                check.base_final,
                if check.holds { "" } else { " (FLAGGED)" }
            ),
        )?;
    }
    Ok(())
}

fn validate_taus(taus: &[f64]) -> Result<()> {
    match taus.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        Some(t) => Err(Error::Config(format!("tau must lie in (0, 1), got {t}"))),
        None => Ok(()),
    }
}

pub fn cmd_profiles(args: &ProfilesArgs, stdout: &mut dyn Write) -> Result<()> {
    validate_taus(&args.taus)?;
    let files = bench::regenerate_profiles(&args.out, &args.taus)?;
    for f in files {
        say(stdout, format_args!("{}", f.display()))?;
    }
    Ok(())
}

pub fn cmd_problems_list(stdout: &mut dyn Write) -> Result<()> {
    for info in standard_registry().list() {
        say(stdout, format_args!("{}", serde_json::to_string(&info)?))?;
    }
    Ok(())
}
