//! Directional k-means: partitions direction/quotient samples `(d_i, s_i)`
//! into `p` groups and fits one generator `v_j` per group so that
//! `d_i^T v_j ~ s_i`, alternating assignment and least-squares refits.
//!
//! The alternation starts from a partition rather than from all-zero
//! generators (which would tie every assignment). Restart 0 is seeded by
//! farthest-first traversal over the per-sample exact fits
//! `s_i d_i / |d_i|^2`; the other restarts use seeded random partitions.
//! The restart with the lowest total residual wins, ties (up to rounding)
//! going to the lower restart index.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One direction and its difference quotient `(f(x + a d) - f(x)) / a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePair {
    pub d: DVector<f64>,
    pub s: f64,
}

impl SamplePair {
    pub fn new(d: DVector<f64>, s: f64) -> Self {
        Self { d, s }
    }
}

/// Ordered collection of [`SamplePair`]s sharing one dimension.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleSet {
    pairs: Vec<SamplePair>,
}

impl SampleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// # Panics
    /// If `pair.d` has a different dimension from the pairs already stored.
    pub fn push(&mut self, pair: SamplePair) {
        if let Some(first) = self.pairs.first() {
            assert_eq!(first.d.len(), pair.d.len(), "sample dimension mismatch");
        }
        self.pairs.push(pair);
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = SamplePair>) -> Self {
        let mut set = Self::new();
        for p in pairs {
            set.push(p);
        }
        set
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.pairs.first().map(|p| p.d.len())
    }

    pub fn pairs(&self) -> &[SamplePair] {
        &self.pairs
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SamplePair> {
        self.pairs.iter()
    }

    pub fn clear(&mut self) {
        self.pairs.clear();
    }

    pub fn truncate(&mut self, len: usize) {
        self.pairs.truncate(len);
    }

    /// `sum_i s_i^2`.
    pub fn energy(&self) -> f64 {
        self.pairs.iter().map(|p| p.s * p.s).sum()
    }
}

impl<'a> IntoIterator for &'a SampleSet {
    type Item = &'a SamplePair;
    type IntoIter = std::slice::Iter<'a, SamplePair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

/// Result of one alternation run.
#[derive(Debug, Clone)]
pub struct ClusterModel {
    pub generators: Vec<DVector<f64>>,
    /// Disjoint index sets covering `0..r`.
    pub assignments: Vec<Vec<usize>>,
    pub residuals: Vec<f64>,
    pub total_residual: f64,
    /// Clustering objective after each refit, in order.
    pub trace: Vec<f64>,
}

impl ClusterModel {
    /// Generators whose cluster received at least one sample.
    pub fn supported_generators(&self) -> Vec<DVector<f64>> {
        self.generators
            .iter()
            .zip(&self.assignments)
            .filter(|(_, members)| !members.is_empty())
            .map(|(g, _)| g.clone())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansOptions {
    pub h_max: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            h_max: 20,
            restarts: 5,
            seed: 0,
        }
    }
}

fn squared_residual(pair: &SamplePair, v: &DVector<f64>) -> f64 {
    let r = pair.d.dot(v) - pair.s;
    r * r
}

/// Puts each sample in the cluster whose generator explains it best; ties go
/// to the lowest cluster index.
pub fn assign(samples: &SampleSet, generators: &[DVector<f64>]) -> Vec<Vec<usize>> {
    assert!(!generators.is_empty(), "need at least one generator");
    let mut parts = vec![Vec::new(); generators.len()];
    for (i, pair) in samples.iter().enumerate() {
        let mut best = 0;
        let mut best_r = squared_residual(pair, &generators[0]);
        for (j, g) in generators.iter().enumerate().skip(1) {
            let r = squared_residual(pair, g);
            if r < best_r {
                best = j;
                best_r = r;
            }
        }
        parts[best].push(i);
    }
    parts
}

/// Minimum-norm least-squares generator for the rows in `subset`, and its
/// residual. An empty subset yields the zero vector.
pub fn fit_generator(samples: &SampleSet, subset: &[usize]) -> (DVector<f64>, f64) {
    let n = samples.dim().unwrap_or(0);
    if subset.is_empty() {
        return (DVector::zeros(n), 0.0);
    }
    let rows = DMatrix::from_fn(subset.len(), n, |r, c| samples.pairs[subset[r]].d[c]);
    let rhs = DVector::from_iterator(subset.len(), subset.iter().map(|&i| samples.pairs[i].s));
    let v = min_norm_lstsq(rows, &rhs);
    let phi = subset
        .iter()
        .map(|&i| squared_residual(&samples.pairs[i], &v))
        .sum();
    (v, phi)
}

/// Minimum-norm least-squares solution through the pseudo-inverse of the
/// smaller Gram matrix (`A^T A` or `A A^T`).
fn min_norm_lstsq(a: DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let (m, n) = a.shape();
    if m >= n {
        let rhs = a.tr_mul(b);
        pinv_solve(a.tr_mul(&a), &rhs, m.max(n))
    } else {
        let y = pinv_solve(&a * a.transpose(), b, m.max(n));
        a.tr_mul(&y)
    }
}

fn pinv_solve(gram: DMatrix<f64>, rhs: &DVector<f64>, dim: usize) -> DVector<f64> {
    let eig = gram.symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().fold(0.0_f64, |m, &l| m.max(l));
    let cutoff = lambda_max * dim as f64 * f64::EPSILON;
    let mut out = DVector::zeros(rhs.len());
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > cutoff {
            let u = eig.eigenvectors.column(k);
            out.axpy(u.dot(rhs) / lambda, &u, 1.0);
        }
    }
    out
}

/// Runs the alternation from a fixed starting partition.
///
/// # Panics
/// If `partition` is empty.
pub fn kmeans_from_partition(
    samples: &SampleSet,
    mut partition: Vec<Vec<usize>>,
    h_max: usize,
) -> ClusterModel {
    assert!(!partition.is_empty(), "need at least one cluster");
    let (mut generators, mut residuals) = refit(samples, &partition);
    let mut trace = vec![residuals.iter().sum::<f64>()];
    for _ in 0..h_max {
        let next = assign(samples, &generators);
        if next == partition {
            break;
        }
        partition = next;
        (generators, residuals) = refit(samples, &partition);
        trace.push(residuals.iter().sum());
    }
    ClusterModel {
        total_residual: residuals.iter().sum(),
        generators,
        assignments: partition,
        residuals,
        trace,
    }
}

fn refit(samples: &SampleSet, partition: &[Vec<usize>]) -> (Vec<DVector<f64>>, Vec<f64>) {
    partition.iter().map(|idx| fit_generator(samples, idx)).unzip()
}

fn check_cluster_count(samples: &SampleSet, p: usize, h_max: usize) -> Result<()> {
    if p == 0 || p > samples.len() {
        return Err(Error::Precondition(format!(
            "cluster count {p} must lie in 1..={}",
            samples.len()
        )));
    }
    if h_max == 0 {
        return Err(Error::Precondition("h_max must be at least 1".into()));
    }
    Ok(())
}

/// Every restart's final model, restart 0 first.
pub fn kmeans_restarts(
    samples: &SampleSet,
    p: usize,
    opts: &KMeansOptions,
) -> Result<Vec<ClusterModel>> {
    check_cluster_count(samples, p, opts.h_max)?;
    let restarts = opts.restarts.max(1);
    let mut models = Vec::with_capacity(restarts);
    models.push(kmeans_from_partition(
        samples,
        farthest_first_partition(samples, p),
        opts.h_max,
    ));
    for k in 1..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(k as u64);
        models.push(kmeans_from_partition(
            samples,
            random_partition(samples.len(), p, &mut rng),
            opts.h_max,
        ));
    }
    Ok(models)
}

/// Relative (to `sum s_i^2`) tolerance under which two restarts tie.
pub const RESTART_TIE_RTOL: f64 = 1e-12;

/// Best-of-restarts directional k-means with the default restart count.
pub fn kmeans_directional(
    samples: &SampleSet,
    p: usize,
    h_max: usize,
    seed: u64,
) -> Result<ClusterModel> {
    kmeans_directional_with(
        samples,
        p,
        &KMeansOptions {
            h_max,
            seed,
            ..KMeansOptions::default()
        },
    )
}

pub fn kmeans_directional_with(
    samples: &SampleSet,
    p: usize,
    opts: &KMeansOptions,
) -> Result<ClusterModel> {
    let models = kmeans_restarts(samples, p, opts)?;
    let best = models
        .iter()
        .map(|m| m.total_residual)
        .fold(f64::INFINITY, f64::min);
    // Residuals within rounding of the best count as ties.
    let slack = RESTART_TIE_RTOL * samples.energy().max(f64::MIN_POSITIVE);
    Ok(models
        .into_iter()
        .find(|m| m.total_residual <= best + slack)
        .expect("at least one restart"))
}

fn farthest_first_partition(samples: &SampleSet, p: usize) -> Vec<Vec<usize>> {
    let candidates: Vec<DVector<f64>> = samples
        .iter()
        .map(|pair| {
            let nn = pair.d.norm_squared();
            if nn > 0.0 {
                &pair.d * (pair.s / nn)
            } else {
                DVector::zeros(pair.d.len())
            }
        })
        .collect();
    let first = (0..candidates.len())
        .max_by(|&a, &b| {
            candidates[a]
                .norm_squared()
                .total_cmp(&candidates[b].norm_squared())
                .then(b.cmp(&a))
        })
        .unwrap();
    let mut chosen = vec![first];
    let mut nearest: Vec<f64> = candidates
        .iter()
        .map(|c| (c - &candidates[first]).norm_squared())
        .collect();
    while chosen.len() < p {
        let next = (0..candidates.len())
            .max_by(|&a, &b| nearest[a].total_cmp(&nearest[b]).then(b.cmp(&a)))
            .unwrap();
        chosen.push(next);
        for (i, c) in candidates.iter().enumerate() {
            nearest[i] = nearest[i].min((c - &candidates[next]).norm_squared());
        }
    }
    let seeds: Vec<DVector<f64>> = chosen.iter().map(|&i| candidates[i].clone()).collect();
    assign(samples, &seeds)
}

/// Uniform random partition of `0..r` into `p` non-empty groups.
fn random_partition(r: usize, p: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..r).collect();
    order.shuffle(rng);
    let mut parts = vec![Vec::new(); p];
    for (k, &i) in order.iter().enumerate() {
        let j = if k < p { k } else { rng.random_range(0..p) };
        parts[j].push(i);
    }
    for part in &mut parts {
        part.sort_unstable();
    }
    parts
}
