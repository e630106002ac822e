//! Directional k-means on quotients sampled from a max of three linear
//! pieces. With three clusters the generators come back exactly.
//!
//! ```bash
//! cargo run --example directional_clustering
//! ```

use nalgebra::DVector;
use nsdfo::clustering::{kmeans_directional, ClusterModel, SamplePair, SampleSet};

/// The hidden pieces.
pub fn generators() -> [DVector<f64>; 3] {
    [
        DVector::from_vec(vec![1.0, 0.0, 0.0]),
        DVector::from_vec(vec![0.0, 2.0, 0.0]),
        DVector::from_vec(vec![-1.0, -1.0, 1.0]),
    ]
}

/// Directional derivatives `max_j d^T g_j` along a fixed direction set.
pub fn samples() -> SampleSet {
    let g = generators();
    let mut set = SampleSet::new();
    for k in 0..24 {
        let t = k as f64 * 0.7;
        let d = DVector::from_vec(vec![t.cos(), (1.3 * t).sin(), (0.4 * t).cos() - 0.5]).normalize();
        let s = g.iter().map(|v| d.dot(v)).fold(f64::NEG_INFINITY, f64::max);
        set.push(SamplePair::new(d, s));
    }
    set
}

pub fn run() -> nsdfo::Result<Vec<ClusterModel>> {
    let set = samples();
    (1..=3).map(|p| kmeans_directional(&set, p, 20, 0)).collect()
}

#[allow(dead_code)]
fn main() -> nsdfo::Result<()> {
    for model in run()? {
        println!("p = {}: residual {:.3e}, rounds {}", model.generators.len(), model.total_residual, model.trace.len());
        for v in &model.generators {
            println!("    {:.4?}", v.as_slice());
        }
    }
    Ok(())
}
