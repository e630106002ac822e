//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.
//!
//! ```bash
//! cargo test --release --test acceptance
//! ```

#[path = "../examples/profile_fixture.rs"]
#[allow(dead_code)]
mod profile_fixture;

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use nsdfo::bench::{run_suite, ProblemKey, SuiteSpec};
use nsdfo::clustering::{
    kmeans_directional_with, kmeans_from_partition, KMeansOptions, SamplePair, SampleSet,
};
use nsdfo::direction::compute_direction;
use nsdfo::linesearch::{continuous_search, LineSearchConfig};
use nsdfo::problems::{registry_get, standard_registry, EvalCounter};
use nsdfo::simplex_qp::{min_norm_point, GeneratorSet, SpdMetric};
use nsdfo::solver::{run_solver, SolverConfig, SolverKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn random_vec(rng: &mut impl Rng, n: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(-scale..scale))
}

fn timed(limit: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = f();
    let took = start.elapsed();
    let within = took <= limit;
    Verdict::new(
        v.pass && within,
        format!("[{:.2?}, limit {:.0?}] {}", took, limit, v.detail),
    )
}

fn golden_direction() -> Verdict {
    let n = 5;
    let unit = |i: usize, sign: f64| DVector::from_fn(n, |k, _| if k == i { sign } else { 0.0 });
    let samples = SampleSet::from_pairs(
        (0..n)
            .map(|i| SamplePair::new(unit(i, 1.0), 1.0))
            .chain((0..n).map(|i| SamplePair::new(unit(i, -1.0), 0.0))),
    );
    let out = match compute_direction(&samples, &SpdMetric::identity(n), 1e-10, 20, 0) {
        Ok(o) => o,
        Err(e) => return Verdict::new(false, format!("error: {e}")),
    };
    let Some(xi) = out.xi_star.as_ref().filter(|_| out.found) else {
        return Verdict::new(false, "no direction found");
    };
    let xi_err = xi.point.iter().map(|v| (v - 0.2).abs()).fold(0.0, f64::max);
    // Generator order is a labeling choice; only the multiset of weights matters.
    let w_err = xi.weights.iter().map(|w| (w - 0.2).abs()).fold(0.0, f64::max);
    let target = -1.0 / (n as f64).sqrt();
    let d_err = out.direction.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
    let maxl = registry_get("maxl", n).unwrap();
    let trial = DVector::from_element(n, 1.0) + &out.direction * 0.1;
    let f = maxl.value(trial.as_slice());
    let pass = xi.weights.len() == n && xi_err <= 1e-8 && w_err <= 1e-8 && d_err <= 1e-8 && f < 1.0;
    Verdict::new(
        pass,
        format!("|xi*-e/5| {xi_err:.1e}, |w-1/5| {w_err:.1e}, |d+e/sqrt5| {d_err:.1e}, maxl(e+0.1d) {f:.4}"),
    )
}

/// Minimum of `w^T G w` over the simplex grid `{w : w_i in h*Z}` restricted
/// to the box `lo..=hi` on the first `p-1` weights.
fn grid_min(g: &DMatrix<f64>, lo: &[f64], hi: &[f64], h: f64) -> (f64, Vec<f64>) {
    let p = g.nrows();
    let mut best = (f64::INFINITY, vec![0.0; p]);
    let mut w = vec![0.0; p];
    #[allow(clippy::too_many_arguments)]
    fn walk(
        k: usize,
        rest: f64,
        w: &mut Vec<f64>,
        g: &DMatrix<f64>,
        lo: &[f64],
        hi: &[f64],
        h: f64,
        best: &mut (f64, Vec<f64>),
    ) {
        let p = w.len();
        if k == p - 1 {
            if rest < -1e-12 {
                return;
            }
            w[k] = rest.max(0.0);
            let mut q = 0.0;
            for i in 0..p {
                for j in 0..p {
                    q += w[i] * g[(i, j)] * w[j];
                }
            }
            if q < best.0 {
                *best = (q, w.clone());
            }
            return;
        }
        let start = (lo[k].max(0.0) / h).ceil() as i64;
        let stop = (hi[k].min(rest) / h + 1e-9).floor() as i64;
        for m in start..=stop {
            w[k] = m as f64 * h;
            walk(k + 1, rest - w[k], w, g, lo, hi, h, best);
        }
    }
    walk(0, 1.0, &mut w, g, lo, hi, h, &mut best);
    best
}

fn brute_force(g: &DMatrix<f64>) -> f64 {
    let p = g.nrows();
    if p == 1 {
        return g[(0, 0)];
    }
    let mut h = 1e-3;
    let (mut q, mut w) = grid_min(g, &vec![0.0; p - 1], &vec![1.0; p - 1], h);
    for _ in 0..2 {
        let radius = 2.0 * h;
        h *= 1e-2;
        let lo: Vec<f64> = w[..p - 1].iter().map(|v| v - radius).collect();
        let hi: Vec<f64> = w[..p - 1].iter().map(|v| v + radius).collect();
        let (q2, w2) = grid_min(g, &lo, &hi, h);
        if q2 < q {
            q = q2;
            w = w2;
        }
    }
    q
}

fn min_norm_qp() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_vertex = f64::INFINITY;
    let mut worst_gap: f64 = 0.0;
    let mut brute_checked = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let p = rng.random_range(1..=6);
        let gens = GeneratorSet::new((0..p).map(|_| random_vec(&mut rng, n, 1.0)).collect()).unwrap();
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let b = &a * a.transpose() + DMatrix::identity(n, n);
        let b = (&b + b.transpose()) * 0.5;
        let metric = SpdMetric::new(b.clone()).unwrap();
        let r = match min_norm_point(&gens, &metric, 1e-10) {
            Ok(r) => r,
            Err(e) => return Verdict::new(false, format!("qp error: {e}")),
        };
        for v in gens.vectors() {
            worst_vertex = worst_vertex.min(metric.inv_inner(&r.point, &(v - &r.point)));
        }
        if p <= 3 {
            // LU inverse, not the library's Cholesky path.
            let b_inv = b.clone().try_inverse().expect("spd is invertible");
            let v = DMatrix::from_columns(gens.vectors());
            let g = v.transpose() * &b_inv * &v;
            let q = brute_force(&g);
            worst_gap = worst_gap.max((r.objective - q).abs());
            brute_checked += 1;
        }
    }
    Verdict::new(
        worst_vertex >= -1e-8 && worst_gap <= 1e-4,
        format!(
            "min vertex residual {worst_vertex:.1e}, max |q - brute| {worst_gap:.1e} over {brute_checked} small instances"
        ),
    )
}

fn linesearch_contract() -> Verdict {
    let problems: Vec<_> = standard_registry()
        .list()
        .into_iter()
        .map(|i| registry_get(&i.name, i.dim).unwrap())
        .collect();
    let cfg = LineSearchConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut successes, mut failures) = (0, 0);
    for case in 0..500 {
        let problem = &problems[case % problems.len()];
        let n = problem.dim();
        let y = DVector::from_column_slice(problem.start_point()) + random_vec(&mut rng, n, 1.0);
        let dir = random_vec(&mut rng, n, 1.0).normalize();
        let alpha = 10f64.powf(rng.random_range(-4.0..0.6));
        let fy = problem.value(y.as_slice());
        let mut counter = EvalCounter::new();
        let r = match continuous_search(alpha, &y, fy, &dir, SampleSet::new(), &cfg, problem, &mut counter) {
            Ok(r) => r,
            Err(e) => return Verdict::new(false, format!("case {case}: {e}")),
        };
        let ok = if r.succeeded() {
            successes += 1;
            let fx = problem.value((&y + &r.direction * r.alpha).as_slice());
            fx <= fy - cfg.gamma * r.alpha * r.alpha
                && fx == r.value
                && r.samples.is_empty()
                && r.alpha <= cfg.alpha_max
        } else {
            failures += 1;
            let plus = problem.value((&y + &dir * alpha).as_slice());
            let minus = problem.value((&y - &dir * alpha).as_slice());
            let pairs = r.samples.pairs();
            pairs.len() == 2
                && pairs[0].d == dir
                && pairs[0].s == (plus - fy) / alpha
                && pairs[1].d == -&dir
                && pairs[1].s == (minus - fy) / alpha
                && r.evals_used == 2
        };
        if !ok || r.evals_used != counter.count() {
            return Verdict::new(false, format!("case {case} on {} violates the contract", problem.name()));
        }
    }
    Verdict::new(true, format!("500 cases, {successes} successes, {failures} failures"))
}

fn clustering() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_rise: f64 = 0.0;
    let mut worst_recovery: f64 = 0.0;
    for set in 0..100 {
        let n = rng.random_range(2..=5);
        let p = rng.random_range(1..=4);
        let truth: Vec<DVector<f64>> = (0..p).map(|_| random_vec(&mut rng, n, 3.0)).collect();
        let mut samples = SampleSet::new();
        let mut partition = vec![Vec::new(); p];
        for i in 0..p * (n + 2) {
            let d = random_vec(&mut rng, n, 1.0);
            samples.push(SamplePair::new(d.clone(), d.dot(&truth[i % p])));
            partition[i % p].push(i);
        }
        let opts = KMeansOptions { seed: set, ..KMeansOptions::default() };
        let model = match kmeans_directional_with(&samples, p, &opts) {
            Ok(m) => m,
            Err(e) => return Verdict::new(false, format!("set {set}: {e}")),
        };
        let scale = samples.energy().max(1.0);
        for w in model.trace.windows(2) {
            worst_rise = worst_rise.max((w[1] - w[0]) / scale);
        }
        let recovered = kmeans_from_partition(&samples, partition, 20);
        worst_recovery = worst_recovery.max(recovered.total_residual);
    }
    Verdict::new(
        worst_rise <= 1e-12 && worst_recovery <= 1e-20,
        format!("max relative trace rise {worst_rise:.1e}, max recovery residual {worst_recovery:.1e}"),
    )
}

const CONVERGENCE_SET: [(&str, usize); 6] = [
    ("maxq", 20),
    ("maxl", 10),
    ("l1hilb", 20),
    ("crescent", 2),
    ("demymalo", 2),
    ("cb2", 2),
];

fn convergence() -> Verdict {
    let config = SolverConfig::default();
    let mut misses = Vec::new();
    let mut lines = Vec::new();
    for (name, n) in CONVERGENCE_SET {
        let problem = registry_get(name, n).unwrap();
        let f_star = problem.known_optimum().unwrap();
        let target = f_star + 1e-3 * (1.0 + f_star.abs());
        for kind in SolverKind::ALL {
            let rec = match run_solver(kind, &problem, &config) {
                Ok(r) => r,
                Err(e) => return Verdict::new(false, format!("{name} {}: {e}", kind.name())),
            };
            let ok = rec.final_f <= target && rec.evals <= 20_000 * n;
            lines.push(format!(
                "    {name}({n}) {}: f - f* = {:.2e}, {} evals{}",
                kind.name(),
                rec.final_f - f_star,
                rec.evals,
                if ok { "" } else { "  <- miss" }
            ));
            if !ok {
                misses.push(format!("{name}({n}) {}", kind.name()));
            }
        }
    }
    let summary = if misses.is_empty() {
        "all runs within tolerance".to_string()
    } else {
        format!("missed: {}", misses.join(", "))
    };
    Verdict::new(misses.is_empty(), format!("{summary}\n{}", lines.join("\n")))
}

fn convergence_spec() -> SuiteSpec {
    SuiteSpec {
        problems: CONVERGENCE_SET.iter().map(|(p, n)| ProblemKey::new(*p, *n)).collect(),
        solvers: SolverKind::ALL.to_vec(),
        config: SolverConfig::default(),
        taus: vec![1e-3],
        jobs: 0,
    }
}

fn improvement() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let outcome = match run_suite(&convergence_spec(), dir.path()) {
        Ok(o) => o,
        Err(e) => return Verdict::new(false, format!("suite error: {e}")),
    };
    let m = &outcome.manifest;
    let Some(check) = m.improvement.iter().find(|c| c.tau == 1e-3) else {
        return Verdict::new(false, "manifest has no improvement check for tau=1e-3");
    };
    let flagged = m.warnings.iter().any(|w| w.contains("below csdfn") && w.contains("tau=1e-3"));
    let consistent = check.holds || flagged;
    Verdict::new(
        consistent,
        format!(
            "data profile at final kappa: fast-csdfn {:.3}, csdfn {:.3}; {}",
            check.fast_final,
            check.base_final,
            if check.holds { "holds" } else if flagged { "flagged in manifest" } else { "NOT flagged" }
        ),
    )
}

fn profiles() -> Verdict {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    let mut bad = Vec::new();
    let mut expect = |label: &str, got: f64, want: f64| {
        if !close(got, want) {
            bad.push(format!("{label} = {got} (want {want})"));
        }
    };
    let curve = |curves: &[nsdfo::bench::ProfileCurve], s: &str| {
        curves.iter().find(|c| c.solver == s).cloned().expect("solver curve")
    };

    let (perf, data) = profile_fixture::run(&profile_fixture::two_by_two(), 1e-1);
    for s in ["A", "B"] {
        let c = curve(&perf, s);
        expect(&format!("2x2 rho_{s}(1)"), c.value_at(1.0), 0.5);
        expect(&format!("2x2 rho_{s}(2)"), c.value_at(2.0), 1.0);
    }
    let (a, b) = (curve(&data, "A"), curve(&data, "B"));
    for (k, want) in [(0.99, 0.0), (1.0, 0.5), (2.99, 0.5), (3.0, 1.0)] {
        expect(&format!("2x2 d_A({k})"), a.value_at(k), want);
    }
    for (k, want) in [(1.0, 0.0), (1.5, 0.5), (1.99, 0.5), (2.0, 1.0)] {
        expect(&format!("2x2 d_B({k})"), b.value_at(k), want);
    }

    let (perf, data) = profile_fixture::run(&profile_fixture::three_by_two(), 1e-1);
    let (pa, pb) = (curve(&perf, "A"), curve(&perf, "B"));
    expect("3x2 rho_A(1)", pa.value_at(1.0), 2.0 / 3.0);
    expect("3x2 rho_A(2)", pa.value_at(2.0), 1.0);
    expect("3x2 rho_B(1)", pb.value_at(1.0), 1.0 / 3.0);
    expect("3x2 rho_B(2)", pb.value_at(2.0), 2.0 / 3.0);
    expect("3x2 rho_B(1e6)", pb.value_at(1e6), 2.0 / 3.0);
    let (a, b) = (curve(&data, "A"), curve(&data, "B"));
    for (k, want) in [(1.0, 1.0 / 3.0), (3.0, 2.0 / 3.0), (4.0, 1.0)] {
        expect(&format!("3x2 d_A({k})"), a.value_at(k), want);
    }
    for (k, want) in [(1.5, 1.0 / 3.0), (2.0, 2.0 / 3.0), (1e6, 2.0 / 3.0)] {
        expect(&format!("3x2 d_B({k})"), b.value_at(k), want);
    }
    Verdict::new(
        bad.is_empty(),
        if bad.is_empty() { "all fixture values exact".into() } else { bad.join("; ") },
    )
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn reproducibility() -> Verdict {
    let mut bundles = Vec::new();
    for jobs in [1, 4] {
        let dir = tempfile::tempdir().unwrap();
        let spec = SuiteSpec { jobs, taus: vec![1e-1, 1e-3, 1e-5], ..convergence_spec() };
        if let Err(e) = run_suite(&spec, dir.path()) {
            return Verdict::new(false, format!("suite error: {e}"));
        }
        bundles.push(csv_files(dir.path()));
    }
    let same = bundles[0] == bundles[1];
    Verdict::new(
        same && !bundles[0].is_empty(),
        format!(
            "{} CSV files, {} between jobs=1 and jobs=4",
            bundles[0].len(),
            if same { "byte-identical" } else { "DIFFERENT" }
        ),
    )
}

type Criterion = (&'static str, Duration, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("golden maxl direction", Duration::from_secs(1), golden_direction),
        ("min-norm QP vs brute force", Duration::from_secs(30), min_norm_qp),
        ("continuous search contract", Duration::from_secs(60), linesearch_contract),
        ("directional k-means", Duration::from_secs(60), clustering),
        ("convergence on the test set", Duration::from_secs(600), convergence),
        ("data profile improvement", Duration::from_secs(600), improvement),
        ("profile fixture values", Duration::from_secs(10), profiles),
        ("bench reproducibility", Duration::from_secs(600), reproducibility),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.into_iter().enumerate() {
        let v = timed(limit, check);
        if !v.pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            k + 1,
            v.detail
        );
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
