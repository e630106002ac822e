//! Closed-form nonsmooth test problems.
//!
//! Start points follow the minimax collection of Lukšan and Vlček (fixed
//! dimension problems) and the large-scale collection of Karmitsa (scalable
//! problems). Where those sources offer several variants the choice is noted
//! on the constructor.

use super::ObjectiveProblem;

/// `x_i = i` for `i <= n/2`, `x_i = -i` otherwise (1-based).
fn alternating_ramp(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|i| if i <= n / 2 { i as f64 } else { -(i as f64) })
        .collect()
}

/// `max_i x_i^2`, optimum 0 at the origin.
pub(super) fn maxq(n: usize) -> ObjectiveProblem {
    ObjectiveProblem::new("maxq", alternating_ramp(n), Some(0.0), |x| {
        x.iter().map(|v| v * v).fold(f64::NEG_INFINITY, f64::max)
    })
}

/// `max_i |x_i|`, optimum 0 at the origin. Same start point as `maxq`.
pub(super) fn maxl(n: usize) -> ObjectiveProblem {
    ObjectiveProblem::new("maxl", alternating_ramp(n), Some(0.0), |x| {
        x.iter().map(|v| v.abs()).fold(f64::NEG_INFINITY, f64::max)
    })
}

/// `sum_i |sum_j x_j / (i + j - 1)|`, start `e`, optimum 0.
pub(super) fn l1hilb(n: usize) -> ObjectiveProblem {
    ObjectiveProblem::new("l1hilb", vec![1.0; n], Some(0.0), move |x| {
        (1..=n)
            .map(|i| {
                x.iter()
                    .enumerate()
                    .map(|(j, xj)| xj / (i + j) as f64)
                    .sum::<f64>()
                    .abs()
            })
            .sum()
    })
}

pub(super) fn crescent() -> ObjectiveProblem {
    ObjectiveProblem::new("crescent", vec![-1.5, 2.0], Some(0.0), |x| {
        let (a, b) = (x[0], x[1]);
        let r = a * a + (b - 1.0).powi(2);
        (r + b - 1.0).max(-r + b + 1.0)
    })
}

pub(super) fn demymalo() -> ObjectiveProblem {
    ObjectiveProblem::new("demymalo", vec![1.0, 1.0], Some(-3.0), |x| {
        let (a, b) = (x[0], x[1]);
        (5.0 * a + b)
            .max(-5.0 * a + b)
            .max(a * a + b * b + 4.0 * b)
    })
}

/// Charalambous-Bandler 2.
pub(super) fn cb2() -> ObjectiveProblem {
    ObjectiveProblem::new("cb2", vec![1.0, -0.1], Some(CB2_OPTIMUM), |x| {
        let (a, b) = (x[0], x[1]);
        (a * a + b.powi(4))
            .max((2.0 - a).powi(2) + (2.0 - b).powi(2))
            .max(2.0 * (b - a).exp())
    })
}

pub(super) const CB2_OPTIMUM: f64 = 1.952_224_5;

fn cb3_pieces(a: f64, b: f64) -> [f64; 3] {
    [
        a.powi(4) + b * b,
        (2.0 - a).powi(2) + (2.0 - b).powi(2),
        2.0 * (b - a).exp(),
    ]
}

/// Chained CB3 II: the max of the three chained sums. For `n = 2` this is
/// the classic two-variable CB3. Start `2e`, optimum `2(n-1)` at `e`.
pub(super) fn cb3(n: usize) -> ObjectiveProblem {
    let optimum = 2.0 * (n - 1) as f64;
    ObjectiveProblem::new("cb3", vec![2.0; n], Some(optimum), |x| {
        let mut sums = [0.0; 3];
        for w in x.windows(2) {
            for (s, piece) in sums.iter_mut().zip(cb3_pieces(w[0], w[1])) {
                *s += piece;
            }
        }
        sums.into_iter().fold(f64::NEG_INFINITY, f64::max)
    })
}

/// Chained CB3 I: the chained sum of pointwise maxima. Start `2e`, optimum
/// `2(n-1)` at `e`.
pub(super) fn chained_cb3(n: usize) -> ObjectiveProblem {
    let optimum = 2.0 * (n - 1) as f64;
    ObjectiveProblem::new("chained-cb3", vec![2.0; n], Some(optimum), |x| {
        x.windows(2)
            .map(|w| {
                cb3_pieces(w[0], w[1])
                    .into_iter()
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum()
    })
}

const SHOR_WEIGHTS: [f64; 10] = [1.0, 5.0, 10.0, 2.0, 4.0, 3.0, 1.7, 2.5, 6.0, 3.5];
const SHOR_CENTERS: [[f64; 5]; 10] = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [2.0, 1.0, 1.0, 1.0, 3.0],
    [1.0, 2.0, 1.0, 1.0, 2.0],
    [1.0, 4.0, 1.0, 2.0, 2.0],
    [3.0, 2.0, 1.0, 0.0, 1.0],
    [0.0, 2.0, 1.0, 0.0, 1.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [1.0, 0.0, 1.0, 2.0, 1.0],
    [0.0, 0.0, 2.0, 1.0, 0.0],
    [1.0, 1.0, 2.0, 0.0, 0.0],
];

pub(super) const SHOR_OPTIMUM: f64 = 22.600_162;

/// `max_i b_i ||x - a_i||^2` over ten weighted centres.
pub(super) fn shor() -> ObjectiveProblem {
    ObjectiveProblem::new(
        "shor",
        vec![0.0, 0.0, 0.0, 0.0, 1.0],
        Some(SHOR_OPTIMUM),
        |x| {
            SHOR_WEIGHTS
                .iter()
                .zip(SHOR_CENTERS.iter())
                .map(|(b, a)| b * x.iter().zip(a).map(|(xi, ai)| (xi - ai).powi(2)).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max)
        },
    )
}

pub(super) const MAXQUAD_OPTIMUM: f64 = -0.841_408_3;

/// `max_k (x^T A_k x - b_k^T x)`, five dense 10x10 quadratics.
pub(super) fn maxquad() -> ObjectiveProblem {
    const N: usize = 10;
    let mut mats = Vec::with_capacity(5);
    let mut lins = Vec::with_capacity(5);
    for k in 1..=5 {
        let kf = k as f64;
        let mut a = [[0.0f64; N]; N];
        for i in 1..=N {
            for j in (i + 1)..=N {
                let v = (i as f64 / j as f64).exp() * ((i * j) as f64).cos() * kf.sin();
                a[i - 1][j - 1] = v;
                a[j - 1][i - 1] = v;
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            let off: f64 = (0..N).filter(|&j| j != i).map(|j| row[j].abs()).sum();
            row[i] = (i + 1) as f64 * kf.sin().abs() / 10.0 + off;
        }
        let b: [f64; N] =
            std::array::from_fn(|i| ((i + 1) as f64 / kf).exp() * (((i + 1) * k) as f64).sin());
        mats.push(a);
        lins.push(b);
    }
    ObjectiveProblem::new("maxquad", vec![1.0; N], Some(MAXQUAD_OPTIMUM), move |x| {
        mats.iter()
            .zip(&lins)
            .map(|(a, b)| {
                let quad: f64 = (0..N)
                    .map(|i| x[i] * (0..N).map(|j| a[i][j] * x[j]).sum::<f64>())
                    .sum();
                let lin: f64 = (0..N).map(|i| b[i] * x[i]).sum();
                quad - lin
            })
            .fold(f64::NEG_INFINITY, f64::max)
    })
}

pub(super) const WONG1_OPTIMUM: f64 = 680.630_057_3;

/// Minimax form of Hock-Schittkowski problem 100.
pub(super) fn wong1() -> ObjectiveProblem {
    ObjectiveProblem::new(
        "wong1",
        vec![1.0, 2.0, 0.0, 4.0, 0.0, 1.0, 1.0],
        Some(WONG1_OPTIMUM),
        |x| {
            let [x1, x2, x3, x4, x5, x6, x7] = [x[0], x[1], x[2], x[3], x[4], x[5], x[6]];
            let f1 = (x1 - 10.0).powi(2)
                + 5.0 * (x2 - 12.0).powi(2)
                + x3.powi(4)
                + 3.0 * (x4 - 11.0).powi(2)
                + 10.0 * x5.powi(6)
                + 7.0 * x6 * x6
                + x7.powi(4)
                - 4.0 * x6 * x7
                - 10.0 * x6
                - 8.0 * x7;
            let g = [
                2.0 * x1 * x1 + 3.0 * x2.powi(4) + x3 + 4.0 * x4 * x4 + 5.0 * x5 - 127.0,
                7.0 * x1 + 3.0 * x2 + 10.0 * x3 * x3 + x4 - x5 - 282.0,
                23.0 * x1 + x2 * x2 + 6.0 * x6 * x6 - 8.0 * x7 - 196.0,
                4.0 * x1 * x1 + x2 * x2 - 3.0 * x1 * x2 + 2.0 * x3 * x3 + 5.0 * x6 - 11.0 * x7,
            ];
            g.iter().fold(f1, |m, gi| m.max(f1 + 10.0 * gi))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxq_start_value() {
        let p = maxq(20);
        assert_eq!(p.start_point()[9], 10.0);
        assert_eq!(p.start_point()[10], -11.0);
        assert_eq!(p.value(p.start_point()), 400.0);
        assert_eq!(p.value(&[0.0; 20]), 0.0);
    }

    #[test]
    fn maxl_at_ones() {
        assert_eq!(maxl(5).value(&[1.0; 5]), 1.0);
    }

    #[test]
    fn cb2_reference_point() {
        // max{1.0001, 5.41, 2 e^{-1.1}}
        let v = cb2().value(&[1.0, -0.1]);
        assert!((v - 5.41).abs() < 1e-12, "{v}");
    }

    #[test]
    fn cb3_variants_agree_at_optimum() {
        for n in [2, 20, 30, 40] {
            let ones = vec![1.0; n];
            assert_eq!(cb3(n).value(&ones), 2.0 * (n - 1) as f64);
            assert_eq!(chained_cb3(n).value(&ones), 2.0 * (n - 1) as f64);
        }
    }

    #[test]
    fn demymalo_and_crescent_optima() {
        assert_eq!(demymalo().value(&[0.0, -3.0]), -3.0);
        assert_eq!(crescent().value(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn l1hilb_first_term() {
        // n = 1 row: |x_1 / 1|
        let p = l1hilb(2);
        let v = p.value(&[1.0, 0.0]);
        assert!((v - (1.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn maxquad_is_symmetric_dominant() {
        let p = maxquad();
        assert!(p.value(&[0.0; 10]) == 0.0);
        assert!(p.value(p.start_point()).is_finite());
    }
}
