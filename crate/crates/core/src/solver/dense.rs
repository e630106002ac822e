//! Deterministic, asymptotically dense unit directions.
//!
//! Point `k` of the Halton sequence (bases = first `n` primes, starting at
//! index 1) is pushed through the standard normal quantile function and
//! normalized, which maps the uniform low-discrepancy cube onto the sphere.

use nalgebra::DVector;
use statrs::distribution::{ContinuousCDF, Normal};

fn first_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut candidate = 2u64;
    while primes.len() < n {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Van der Corput radical inverse of `index` in `base`.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// The `index`-th direction in `R^n`, unit norm.
pub fn dense_direction(index: usize, n: usize) -> DVector<f64> {
    assert!(n > 0, "dimension must be positive");
    let normal = Normal::standard();
    let k = index as u64 + 1;
    let raw = DVector::from_iterator(
        n,
        first_primes(n)
            .into_iter()
            .map(|b| normal.inverse_cdf(radical_inverse(k, b))),
    );
    let norm = raw.norm();
    if norm > 0.0 && norm.is_finite() {
        raw / norm
    } else {
        let mut e1 = DVector::zeros(n);
        e1[0] = 1.0;
        e1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(first_primes(8), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn van_der_corput_base_two() {
        let got: Vec<f64> = (1..=6).map(|i| radical_inverse(i, 2)).collect();
        assert_eq!(got, vec![0.5, 0.25, 0.75, 0.125, 0.625, 0.375]);
    }

    #[test]
    fn unit_and_deterministic() {
        for n in [1, 2, 3, 10, 40] {
            for i in [0, 1, 2, 17, 999, 123_456] {
                let d = dense_direction(i, n);
                assert!((d.norm() - 1.0).abs() < 1e-12);
                assert_eq!(d, dense_direction(i, n));
            }
        }
    }
}
