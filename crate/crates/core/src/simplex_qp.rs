//! Minimum-norm point of a convex hull in the metric induced by `B^{-1}`.
//!
//! Given generators `v_1..v_p` and an SPD matrix `B`, finds the convex
//! combination `xi = V lambda` minimizing `xi^T B^{-1} xi`. With `B = I` this is
//! the Euclidean minimum-norm point, whose negative is the steepest-descent
//! direction over the hull; a general `B` gives the Newton-type variant
//! `d = -B^{-1} xi`.
//!
//! The default solver is Wolfe's minimum-norm-point algorithm run on the
//! whitened generators `L^{-1} v_j` (`B = L L^T`), which terminates in finitely
//! many steps with an exact active set. A projected-gradient solver over the
//! simplex of weights is also available.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// The columns `V = [v_1 ... v_p]` spanning the hull.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    vectors: Vec<DVector<f64>>,
}

impl GeneratorSet {
    pub fn new(vectors: Vec<DVector<f64>>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::Precondition("generator set is empty".into()));
        };
        let n = first.len();
        if n == 0 || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::Precondition(
                "generators must share a positive dimension".into(),
            ));
        }
        Ok(Self { vectors })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| DVector::from_column_slice(r)).collect())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    /// `V lambda`.
    pub fn combine(&self, weights: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        for (v, &w) in self.vectors.iter().zip(weights.iter()) {
            if w != 0.0 {
                out.axpy(w, v, 1.0);
            }
        }
        out
    }
}

/// A symmetric positive definite matrix with its Cholesky factor cached.
#[derive(Debug, Clone)]
pub struct SpdMetric {
    matrix: DMatrix<f64>,
    factor: Cholesky<f64, Dyn>,
}

impl SpdMetric {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::NotSpd("matrix must be square and non-empty".into()));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotSpd("matrix has non-finite entries".into()));
        }
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::NotSpd(format!("asymmetry {asym:e} exceeds tolerance")));
        }
        let factor = Cholesky::new(matrix.clone())
            .ok_or_else(|| Error::NotSpd("Cholesky factorization failed".into()))?;
        Ok(Self { matrix, factor })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is SPD")
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `B^{-1} v` through the factorization.
    pub fn solve(&self, v: &DVector<f64>) -> DVector<f64> {
        self.factor.solve(v)
    }

    /// `a^T B^{-1} b`.
    pub fn inv_inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(&self.solve(b))
    }

    /// `L^{-1} v` where `B = L L^T`, so that `|L^{-1} v|^2 = v^T B^{-1} v`.
    fn whiten(&self, v: &DVector<f64>) -> DVector<f64> {
        self.factor
            .l_dirty()
            .solve_lower_triangular(v)
            .expect("Cholesky factor has a positive diagonal")
    }
}

/// Output of [`min_norm_point`].
#[derive(Debug, Clone)]
pub struct MinNormResult {
    /// Convex weights `lambda`, one per generator.
    pub weights: DVector<f64>,
    /// `xi* = V lambda`.
    pub point: DVector<f64>,
    /// `xi*^T B^{-1} xi*`.
    pub objective: f64,
    /// `max(0, max_j xi*^T B^{-1} (xi* - v_j))`; zero at an exact solution.
    pub kkt_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QpMethod {
    #[default]
    Wolfe,
    /// Projected gradient with Armijo backtracking from uniform weights.
    /// `max_iter` defaults to `10 p n`.
    ProjectedGradient { max_iter: Option<usize> },
}

pub const DEFAULT_TOL: f64 = 1e-8;

/// Minimum-norm point of `conv(gens)` in the `B^{-1}` metric.
pub fn min_norm_point(gens: &GeneratorSet, metric: &SpdMetric, tol: f64) -> Result<MinNormResult> {
    min_norm_point_with(gens, metric, tol, QpMethod::Wolfe)
}

pub fn min_norm_point_with(
    gens: &GeneratorSet,
    metric: &SpdMetric,
    tol: f64,
    method: QpMethod,
) -> Result<MinNormResult> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    if gens.dim() != metric.dim() {
        return Err(Error::Precondition(format!(
            "generators live in R^{} but the metric is {}x{}",
            gens.dim(),
            metric.dim(),
            metric.dim()
        )));
    }
    let whitened: Vec<DVector<f64>> = gens.vectors().iter().map(|v| metric.whiten(v)).collect();
    let weights = match method {
        QpMethod::Wolfe => wolfe(&whitened),
        QpMethod::ProjectedGradient { max_iter } => {
            let cap = max_iter.unwrap_or(10 * gens.len() * gens.dim());
            projected_gradient(&whitened, tol, cap)
        }
    };

    let point = gens.combine(&weights);
    let x = combine(&whitened, &weights);
    let objective = x.norm_squared();
    let kkt_residual = whitened
        .iter()
        .map(|u| objective - x.dot(u))
        .fold(0.0, f64::max);
    if kkt_residual > tol {
        return Err(Error::QpNotConverged {
            residual: kkt_residual,
        });
    }
    Ok(MinNormResult {
        weights,
        point,
        objective,
        kkt_residual,
    })
}

fn combine(vectors: &[DVector<f64>], weights: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(vectors[0].len());
    for (v, &w) in vectors.iter().zip(weights.iter()) {
        if w != 0.0 {
            out.axpy(w, v, 1.0);
        }
    }
    out
}

/// Wolfe's algorithm in Euclidean geometry. Returns weights over `points`.
fn wolfe(points: &[DVector<f64>]) -> DVector<f64> {
    const OPT_EPS: f64 = 1e-15;
    const WEIGHT_EPS: f64 = 1e-13;

    let p = points.len();
    let scale = points
        .iter()
        .map(|u| u.norm_squared())
        .fold(f64::MIN_POSITIVE, f64::max);

    let start = (0..p)
        .min_by(|&a, &b| points[a].norm_squared().total_cmp(&points[b].norm_squared()))
        .unwrap();
    let mut active = vec![start];
    let mut w = vec![1.0];
    let mut x = points[start].clone();

    let max_major = 50 * (p + points[0].len()) + 100;
    for _ in 0..max_major {
        let xx = x.norm_squared();
        let (entering, lowest) = (0..p)
            .map(|j| (j, x.dot(&points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - lowest <= OPT_EPS * scale || active.contains(&entering) {
            break;
        }
        active.push(entering);
        w.push(0.0);

        loop {
            let Some(mu) = affine_minimizer(points, &active) else {
                // Affinely dependent active set: keep the current point.
                active.pop();
                w.pop();
                return scatter(p, &active, &w);
            };
            if mu.iter().all(|&m| m > WEIGHT_EPS) {
                w = mu;
                break;
            }
            let theta = w
                .iter()
                .zip(&mu)
                .filter(|(&wi, &mi)| mi <= WEIGHT_EPS && wi - mi > 0.0)
                .map(|(&wi, &mi)| wi / (wi - mi))
                .fold(1.0, f64::min);
            for (wi, mi) in w.iter_mut().zip(&mu) {
                *wi = (1.0 - theta) * *wi + theta * mi;
            }
            // Drop at least the blocking index.
            let blocking = (0..w.len())
                .min_by(|&a, &b| w[a].total_cmp(&w[b]))
                .unwrap();
            let mut keep = Vec::with_capacity(w.len());
            for (k, &wk) in w.iter().enumerate() {
                if k != blocking && wk > WEIGHT_EPS {
                    keep.push(k);
                }
            }
            active = keep.iter().map(|&k| active[k]).collect();
            w = keep.iter().map(|&k| w[k]).collect();
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|wi| *wi /= total);
            if active.len() <= 1 {
                w = vec![1.0; active.len()];
                break;
            }
        }
        x = combine_active(points, &active, &w);
    }
    scatter(p, &active, &w)
}

fn scatter(p: usize, active: &[usize], w: &[f64]) -> DVector<f64> {
    let mut out = DVector::zeros(p);
    for (&j, &wj) in active.iter().zip(w) {
        out[j] = wj;
    }
    let total = out.sum();
    out / total
}

fn combine_active(points: &[DVector<f64>], active: &[usize], w: &[f64]) -> DVector<f64> {
    let mut x = DVector::zeros(points[0].len());
    for (&j, &wj) in active.iter().zip(w) {
        x.axpy(wj, &points[j], 1.0);
    }
    x
}

/// Minimizes `|sum mu_i u_i|` over the affine hull of the active points by
/// solving the bordered KKT system. `None` if the points are affinely
/// dependent.
fn affine_minimizer(points: &[DVector<f64>], active: &[usize]) -> Option<Vec<f64>> {
    let m = active.len();
    let mut kkt = DMatrix::zeros(m + 1, m + 1);
    for a in 0..m {
        for b in a..m {
            let g = points[active[a]].dot(&points[active[b]]);
            kkt[(a, b)] = g;
            kkt[(b, a)] = g;
        }
        kkt[(a, m)] = 1.0;
        kkt[(m, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(m + 1);
    rhs[m] = 1.0;
    let sol = kkt.lu().solve(&rhs)?;
    let mu: Vec<f64> = sol.iter().take(m).copied().collect();
    if mu.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let total: f64 = mu.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return None;
    }
    Some(mu.into_iter().map(|v| v / total).collect())
}

fn projected_gradient(points: &[DVector<f64>], tol: f64, max_iter: usize) -> DVector<f64> {
    let p = points.len();
    let gram = DMatrix::from_fn(p, p, |a, b| points[a].dot(&points[b]));
    let value = |l: &DVector<f64>| l.dot(&(&gram * l));
    let residual = |l: &DVector<f64>| {
        let ql = &gram * l;
        (l.dot(&ql) - ql.min()).max(0.0)
    };

    let mut lambda = DVector::from_element(p, 1.0 / p as f64);
    let mut step = 1.0 / (2.0 * gram.diagonal().max().max(f64::MIN_POSITIVE));
    for _ in 0..max_iter {
        if residual(&lambda) <= tol {
            break;
        }
        let grad = 2.0 * (&gram * &lambda);
        let f0 = value(&lambda);
        step *= 2.0;
        let next = loop {
            let trial = DVector::from_vec(project_onto_simplex(
                (&lambda - step * &grad).as_slice(),
            ));
            let delta = &trial - &lambda;
            if value(&trial) <= f0 + grad.dot(&delta) + delta.norm_squared() / (2.0 * step)
                || step < 1e-300
            {
                break trial;
            }
            step *= 0.5;
        };
        if next == lambda {
            break;
        }
        lambda = next;
    }
    lambda
}

/// Euclidean projection onto `{lambda >= 0, sum lambda = 1}`.
pub fn project_onto_simplex(w: &[f64]) -> Vec<f64> {
    assert!(!w.is_empty(), "cannot project an empty vector");
    let mut sorted = w.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut threshold = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            threshold = t;
        }
    }
    w.iter().map(|&v| (v - threshold).max(0.0)).collect()
}
