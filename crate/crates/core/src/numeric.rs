//! Small numerical building blocks shared by the other modules: log-factorials,
//! Gauss–Legendre rules, bit-stable summation, tiny dense determinants and
//! least-squares line fits.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// A value together with the truncation bound of the procedure that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluated {
    pub value: f64,
    pub bound: f64,
}

const LOG_FACTORIAL_TABLE_LEN: usize = 257;

fn log_factorial_table() -> &'static [f64; LOG_FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; LOG_FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; LOG_FACTORIAL_TABLE_LEN];
        let mut acc = 0.0;
        for (k, slot) in table.iter_mut().enumerate().skip(1) {
            acc += (k as f64).ln();
            *slot = acc;
        }
        table
    })
}

/// `ln(n!)`: exact log-summation up to 256, Stirling series with four
/// correction terms above (relative error far below 1e-14 there).
pub fn log_factorial(n: u64) -> f64 {
    if (n as usize) < LOG_FACTORIAL_TABLE_LEN {
        return log_factorial_table()[n as usize];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + series
}

/// Pairwise (tree) summation. The reduction order depends only on the slice
/// length, so results are bit-stable for a given input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Gauss–Legendre rule on `[-1, 1]`: `(nodes, weights)` in increasing node order.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    let nf = order as f64;
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp;
        loop {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..order {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z_prev = z;
            z = z_prev - p1 / dp;
            if (z - z_prev).abs() <= 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[order - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

/// Determinant of a small dense matrix (row-major, `dim x dim`) by Gaussian
/// elimination with partial pivoting.
pub fn determinant(mut m: Vec<f64>, dim: usize) -> f64 {
    debug_assert_eq!(m.len(), dim * dim);
    let mut det = 1.0;
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&a, &b| m[a * dim + col].abs().total_cmp(&m[b * dim + col].abs()))
            .unwrap_or(col);
        let p = m[pivot * dim + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..dim {
                m.swap(pivot * dim + k, col * dim + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..dim {
            let factor = m[row * dim + col] / p;
            if factor != 0.0 {
                for k in col..dim {
                    m[row * dim + k] -= factor * m[col * dim + k];
                }
            }
        }
    }
    det
}

/// `Σ_{l > m} 1/l²` for `m >= 0`.
pub fn inverse_square_tail(m: u64) -> f64 {
    const DIRECT: u64 = 32;
    let mut head = 0.0;
    let mut m = m;
    while m < DIRECT {
        m += 1;
        head += 1.0 / (m as f64 * m as f64);
    }
    // Euler–Maclaurin for Σ_{l > m} 1/l²
    let x = m as f64;
    let inv = 1.0 / x;
    head + inv - 0.5 * inv * inv + inv.powi(3) / 6.0 - inv.powi(5) / 30.0 + inv.powi(7) / 42.0 - inv.powi(9) / 30.0
}

/// Ordinary least-squares fit of `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(LineFit {
        intercept: my - slope * mx,
        slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_factorial_matches_summation_across_the_switch() {
        for n in [0u64, 1, 2, 10, 256, 257, 300, 1000, 5000] {
            let direct: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
            let got = log_factorial(n);
            let scale = direct.abs().max(1.0);
            assert!((got - direct).abs() / scale < 1e-12, "n={n}: {got} vs {direct}");
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for order in [1usize, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(order);
            for deg in 0..(2 * order) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "order {order} degree {deg}");
            }
        }
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(vec![3.0], 1), 3.0);
        let d = determinant(vec![0.0, 1.0, 1.0, 0.0], 2);
        assert!((d + 1.0).abs() < 1e-15);
        let d = determinant(vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0], 3);
        assert!((d - 18.0).abs() < 1e-12);
    }

    #[test]
    fn pairwise_sum_agrees_with_naive() {
        let v: Vec<f64> = (0..1000).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-12);
    }

    #[test]
    fn inverse_square_tail_matches_zeta() {
        let zeta2 = PI * PI / 6.0;
        assert!((inverse_square_tail(0) - zeta2).abs() < 1e-14);
        let head: f64 = (1..=100).map(|l| 1.0 / (l as f64 * l as f64)).sum();
        assert!((inverse_square_tail(100) - (zeta2 - head)).abs() < 1e-14);
    }

    #[test]
    fn line_fit_recovers_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 - 0.5 * x).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-14);
        assert!((fit.intercept - 1.5).abs() < 1e-14);
    }
}
