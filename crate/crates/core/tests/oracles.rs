//! Exact small-size oracles that share no code with the library paths they check.

use std::collections::HashMap;

use plancherel::kernels::{bessel_kernel, bessel_kernel_diag, det_expectation, sine_covariance, sine_kernel};
use plancherel::young::{hook_count_via_profile, partitions};
use plancherel::{exact_distribution, BesselKernelParams, PatternVector, SeededRng, SineKernelParams, YoungDiagram};
use rand::Rng;

/// Standard tableaux counted by removing one corner at a time.
fn syt_count(rows: &[usize], memo: &mut HashMap<Vec<usize>, u128>) -> u128 {
    if rows.is_empty() {
        return 1;
    }
    if let Some(&v) = memo.get(rows) {
        return v;
    }
    let mut total = 0;
    for i in 0..rows.len() {
        let is_corner = i + 1 == rows.len() || rows[i + 1] < rows[i];
        if is_corner {
            let mut smaller = rows.to_vec();
            smaller[i] -= 1;
            if smaller[i] == 0 {
                smaller.pop();
            }
            total += syt_count(&smaller, memo);
        }
    }
    memo.insert(rows.to_vec(), total);
    total
}

#[test]
fn dimensions_match_tableau_counts() {
    let mut memo = HashMap::new();
    for n in 1..=8 {
        for d in partitions(n) {
            let count = syt_count(d.rows(), &mut memo) as f64;
            let dim = d.log_dim().unwrap().exp();
            assert!((dim - count).abs() < 1e-9 * count, "{d}: {dim} vs {count}");
        }
    }
}

#[test]
fn plancherel_sums_to_one() {
    for n in 1..=10 {
        let total: f64 = partitions(n).iter().map(|d| d.log_plancherel().unwrap().exp()).sum();
        assert!((total - 1.0).abs() < 1e-12, "n={n}: {total}");
    }
}

#[test]
fn exact_distribution_examples() {
    let d4 = exact_distribution(4).unwrap();
    let expect = [(vec![4], 1.0), (vec![3, 1], 9.0), (vec![2, 2], 4.0), (vec![2, 1, 1], 9.0), (vec![1, 1, 1, 1], 1.0)];
    for (rows, num) in expect {
        let p = d4.probability(&YoungDiagram::from_rows(rows).unwrap());
        assert!((p - num / 24.0).abs() < 1e-15);
    }
}

#[test]
fn hook_counts_agree_with_profile_route() {
    let mut rng = SeededRng::new(99, 0);
    for _ in 0..300 {
        let n = rng.random_range(1..=40);
        let d = plancherel::sample_plancherel(n, &mut rng).unwrap();
        let p = d.profile();
        for k in 1..=n {
            assert_eq!(d.hook_count(k), hook_count_via_profile(&p, k).unwrap());
        }
    }
}

/// `E[c_x]` and `E[c_x c_{x+1}]` under the poissonized measure by summing over
/// all diagrams with at most 14 cells.
fn poissonized_moments(theta: f64, xs: &[i64]) -> Vec<(f64, f64)> {
    let eta = theta * theta;
    let mut out = vec![(0.0, 0.0); xs.len()];
    let mut weight = (-eta).exp();
    for n in 0..=14usize {
        if n > 0 {
            weight *= eta / n as f64;
        }
        let diagrams = if n == 0 { vec![YoungDiagram::empty()] } else { partitions(n) };
        for d in diagrams {
            let p = if n == 0 { 1.0 } else { d.log_plancherel().unwrap().exp() };
            let prof = d.profile();
            for (slot, &x) in out.iter_mut().zip(xs) {
                let (a, b) = (prof.bit(x) as f64, prof.bit(x + 1) as f64);
                slot.0 += weight * p * a;
                slot.1 += weight * p * a * b;
            }
        }
    }
    out
}

#[test]
fn poissonized_correlations_are_bessel_determinants() {
    for theta in [0.5, 0.9] {
        let xs: Vec<i64> = (-4..=4).collect();
        let params = BesselKernelParams::with_theta(theta).unwrap();
        for (&x, (one, two)) in xs.iter().zip(poissonized_moments(theta, &xs)) {
            let d0 = bessel_kernel_diag(params, x).unwrap();
            let d1 = bessel_kernel_diag(params, x + 1).unwrap();
            let off = bessel_kernel(params, x, x + 1).unwrap();
            assert!((one - d0).abs() < 1e-10, "theta={theta} x={x}: {one} vs {d0}");
            assert!((two - (d0 * d1 - off * off)).abs() < 1e-10);
        }
    }
}

#[test]
fn sine_determinant_matches_covariance() {
    for a in [-1.7, -0.4, 0.0, 0.9, 1.95] {
        let p = SineKernelParams::new(a).unwrap();
        let rho = sine_kernel(p, 0);
        for k in 1..12 {
            let pat = PatternVector::new(vec![0, k], 5).unwrap();
            let det = det_expectation(|i, j| sine_kernel(p, i - j), &pat, 1e-12).unwrap();
            assert!((det - (rho * rho + sine_covariance(p, 0, k))).abs() < 1e-12);
        }
    }
}
