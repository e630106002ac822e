//! Minimum-norm point of a convex hull under a `B^{-1}` metric, with the
//! optimality certificate checked by hand.
//!
//! ```bash
//! cargo run --example min_norm_point
//! ```

use nalgebra::{DMatrix, DVector};
use nsdfo::simplex_qp::{
    min_norm_point, min_norm_point_with, GeneratorSet, MinNormResult, QpMethod, SpdMetric,
    DEFAULT_TOL,
};

pub struct Solved {
    pub euclidean: MinNormResult,
    pub scaled: MinNormResult,
    pub projected_gradient: MinNormResult,
}

pub fn run() -> nsdfo::Result<Solved> {
    let gens = GeneratorSet::from_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]])?;
    let euclidean = min_norm_point(&gens, &SpdMetric::identity(2), DEFAULT_TOL)?;

    // A stretched metric tilts the answer toward the cheap axis.
    let b = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 1.0]);
    let metric = SpdMetric::new(b)?;
    let scaled = min_norm_point(&gens, &metric, DEFAULT_TOL)?;
    let projected_gradient = min_norm_point_with(
        &gens,
        &metric,
        DEFAULT_TOL,
        QpMethod::ProjectedGradient { max_iter: None },
    )?;
    Ok(Solved {
        euclidean,
        scaled,
        projected_gradient,
    })
}

/// `max_j xi^T B^{-1} (xi - v_j)`: zero at the optimum, never positive
/// beyond rounding.
pub fn vertex_gap(gens: &GeneratorSet, metric: &SpdMetric, xi: &DVector<f64>) -> f64 {
    gens.vectors()
        .iter()
        .map(|v| metric.inv_inner(xi, &(xi - v)))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[allow(dead_code)]
fn main() -> nsdfo::Result<()> {
    let s = run()?;
    println!("identity metric: xi* = {:.6?}, weights {:.6?}", s.euclidean.point.as_slice(), s.euclidean.weights.as_slice());
    println!("B = [[4,1],[1,1]]: xi* = {:.6?}, objective {:.6}", s.scaled.point.as_slice(), s.scaled.objective);
    println!("projected gradient agrees to {:.1e}", (&s.scaled.point - &s.projected_gradient.point).norm());
    println!("kkt residual {:.1e}", s.scaled.kkt_residual);
    Ok(())
}
