//! The entropy constant as a determinantal quadrature plus a double series.
//!
//! The integral part is `(1/4) ∫_{-2}^{2} ∫_0^1 ∫_0^∞ V(a, s, h) dh ds da`, where
//! `V` is four times the variance of the averaged occupation `Σ w_i ω_i` under
//! the sine process. `V h²` is a quadratic form in the covariances
//! `C(d, a) = Cov(ω_0, ω_d)`, so the `a`-integration can be applied to the
//! covariance sequence before the `(s, h)` integration without changing the
//! quadrature result. The `(s, h)` integral is split into unit cells of
//! `e = s + h`, inside which the integrand is a smooth rational function.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernels::{sine_covariance, SineKernelParams};
use crate::numeric::{fit_line, gauss_legendre_on, pairwise_sum, Evaluated};

const SERIES_PREFACTOR: f64 = 32.0 / (PI * PI);

/// `Σ_{l>=1} 1/(l(l+1)(2l+1) k^{2l})` with a bound on the omitted terms.
pub fn hook_series_weight_eval(k: u64, tol: f64) -> Evaluated {
    assert!(k >= 1, "hook length must be positive");
    if k == 1 {
        // partial fractions 1/l + 1/(l+1) - 4/(2l+1) telescope
        return Evaluated {
            value: 3.0 - 4.0 * LN_2,
            bound: 0.0,
        };
    }
    let q = 1.0 / (k as f64 * k as f64);
    let mut power = q;
    let mut sum = 0.0;
    let mut l = 1u64;
    loop {
        let lf = l as f64;
        let term = power / (lf * (lf + 1.0) * (2.0 * lf + 1.0));
        sum += term;
        if term < tol * sum || term == 0.0 {
            // later terms shrink by at least a factor q each
            let next = term * q;
            return Evaluated {
                value: sum,
                bound: next / (1.0 - q),
            };
        }
        power *= q;
        l += 1;
    }
}

pub fn hook_series_weight(k: u64, tol: f64) -> f64 {
    hook_series_weight_eval(k, tol).value
}

/// Value of the double series with its two truncation bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEstimate {
    pub value: f64,
    /// Terms with `k > k_max` and `l >= 2` (those with `l = 1` are summed exactly).
    pub k_tail: f64,
    /// Terms dropped by the relative stopping rule in `l`.
    pub l_tail: f64,
}

/// `(32/π²) Σ_k Σ_l 1/(l(l+1)(2l+1) k^{2l-2} (4k²-1))`.
pub fn entropy_series(k_max: u64, tol: f64) -> Result<SeriesEstimate> {
    if k_max < 10 {
        return Err(invalid(format!("k_max must be at least 10, got {k_max}")));
    }
    if !(tol > 0.0) {
        return Err(invalid("series tolerance must be positive"));
    }
    let mut terms = Vec::with_capacity(k_max as usize);
    let mut l_tail = 0.0;
    for k in 1..=k_max {
        let kf = k as f64;
        let factor = kf * kf / (4.0 * kf * kf - 1.0);
        let w = hook_series_weight_eval(k, tol);
        terms.push(factor * w.value);
        l_tail += factor * w.bound;
    }
    let kf = k_max as f64;
    // l = 1 beyond k_max: Σ_{k>K} 1/(6(4k²-1)) = 1/(12(2K+1))
    terms.push(1.0 / (12.0 * (2.0 * kf + 1.0)));
    let mut k_tail = 0.0;
    for l in 2..60 {
        let lf = l as f64;
        let c = 1.0 / (lf * (lf + 1.0) * (2.0 * lf + 1.0));
        let t = c * kf.powf(1.0 - 2.0 * lf) / ((2.0 * lf - 1.0) * (4.0 - 1.0 / (kf * kf)));
        k_tail += t;
        if t < 1e-18 * k_tail {
            break;
        }
    }
    Ok(SeriesEstimate {
        value: SERIES_PREFACTOR * pairwise_sum(&terms),
        k_tail: SERIES_PREFACTOR * k_tail,
        l_tail: SERIES_PREFACTOR * l_tail,
    })
}

/// Overlap weights `w_i = |[i, i+1] ∩ [s, s+h]| / h`, stored from `first`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeWeights {
    pub s: f64,
    pub h: f64,
    pub first: i64,
    pub weights: Vec<f64>,
}

impl SlopeWeights {
    pub fn get(&self, i: i64) -> f64 {
        if i < self.first {
            return 0.0;
        }
        self.weights.get((i - self.first) as usize).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(k, &w)| (self.first + k as i64, w))
    }
}

pub fn slope_weights(s: f64, h: f64) -> Result<SlopeWeights> {
    if !(0.0..1.0).contains(&s) {
        return Err(invalid(format!("s must lie in [0, 1), got {s}")));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid(format!("h must be positive, got {h}")));
    }
    let e = s + h;
    let last = (e.ceil() as i64 - 1).max(0);
    let weights = (0..=last)
        .map(|i| {
            let lo = s.max(i as f64);
            let hi = e.min(i as f64 + 1.0);
            (hi - lo).max(0.0) / h
        })
        .collect();
    Ok(SlopeWeights {
        s,
        h,
        first: 0,
        weights,
    })
}

/// `E_{𝒮(a)}[((Φ(s+h) - Φ(s))/h - (2/π) arcsin(a/2))²] = 4 Σ w_i w_j Cov(ω_i, ω_j)`.
pub fn local_variance_integrand(a: f64, s: f64, h: f64) -> Result<f64> {
    let p = SineKernelParams::new(a)?;
    let w = slope_weights(s, h)?;
    let mut total = 0.0;
    for (i, wi) in w.iter() {
        for (j, wj) in w.iter() {
            total += wi * wj * sine_covariance(p, i, j);
        }
    }
    Ok((4.0 * total).max(0.0))
}

/// `∫ C(d, a) da` for `d = 0..=max_d`, by Gauss–Legendre in `ρ` with
/// `a = 2 cos(πρ)`.
pub fn averaged_covariances(max_d: usize, a_nodes: usize) -> Vec<f64> {
    let (rho, w) = gauss_legendre_on(a_nodes, 0.0, 1.0);
    let mut out = vec![0.0; max_d + 1];
    for (&r, &wr) in rho.iter().zip(&w) {
        // da = 2π sin(πρ) dρ
        let jac = wr * 2.0 * PI * (PI * r).sin();
        out[0] += jac * r * (1.0 - r);
        let phase = PI * r;
        for (d, slot) in out.iter_mut().enumerate().skip(1) {
            let s = (phase * d as f64).sin() / (PI * d as f64);
            *slot -= jac * s * s;
        }
    }
    out
}

/// Closed forms of [`averaged_covariances`]: `8/π²` at `d = 0` and
/// `-8/(π²(4d² - 1))` otherwise.
pub fn averaged_covariance_exact(d: usize) -> f64 {
    if d == 0 {
        8.0 / (PI * PI)
    } else {
        let df = d as f64;
        -8.0 / (PI * PI * (4.0 * df * df - 1.0))
    }
}

/// Contributions of the cells `m <= e < m+1`, `m = 0..cells`, to
/// `∫_0^1 ∫ 4 Q/h² dh ds` for a covariance sequence `c`.
fn cell_contributions(c: &[f64], cells: usize, s_nodes: usize, h_nodes: usize) -> Vec<f64> {
    assert!(c.len() > cells);
    let k0 = c[0];
    // prefix sums A(p) = Σ_{d=1}^p C(d), B(p) = Σ_{d=1}^p d C(d)
    let mut a_sum = vec![0.0; cells + 1];
    let mut b_sum = vec![0.0; cells + 1];
    for d in 1..=cells {
        a_sum[d] = a_sum[d - 1] + c[d];
        b_sum[d] = b_sum[d - 1] + d as f64 * c[d];
    }
    let (su, sw) = gauss_legendre_on(s_nodes, 0.0, 1.0);
    let harmonic: f64 = (2..cells).map(|m| 1.0 / m as f64).sum::<f64>().max(1.0);
    let mut out = Vec::with_capacity(cells);
    // m = 0: a single partial cell, Q = C(0) h²
    out.push(4.0 * k0 * 0.5);
    if cells > 1 {
        // m = 1: two partial cells, integrated in closed form
        out.push(4.0 * (k0 * (2.0 - 2.0 * LN_2) + c[1] * (2.0 * LN_2 - 1.0)));
    }
    for m in 2..cells {
        let order = ((h_nodes as f64 / (harmonic * m as f64)).ceil() as usize).clamp(2, 64);
        let (hu, hw) = gauss_legendre_on(order, 0.0, 1.0);
        let l = m - 1;
        let lf = l as f64;
        let interior = lf * k0 + 2.0 * (lf * a_sum[l - 1] - b_sum[l - 1]);
        let cross = 2.0 * a_sum[m - 1];
        let ends = 2.0 * c[m];
        let mut acc = 0.0;
        for (&u0, &w0) in su.iter().zip(&sw) {
            let mut inner = 0.0;
            for (&um, &wm) in hu.iter().zip(&hw) {
                let h = u0 + um + lf;
                let q = interior + cross * (u0 + um) + ends * u0 * um + k0 * (u0 * u0 + um * um);
                inner += wm * q / (h * h);
            }
            acc += w0 * inner;
        }
        out.push(4.0 * acc);
    }
    out
}

/// Model `(A ln m + B)/m²` for the cell contributions, fitted on `[lo, hi)`,
/// and its integral beyond `cells - 1/2`.
fn fitted_tail(cells_vals: &[f64], lo: usize, hi: usize, cutoff: usize) -> Option<(f64, f64, f64)> {
    let ms: Vec<f64> = (lo..hi).map(|m| m as f64).collect();
    let xs: Vec<f64> = ms.iter().map(|m| m.ln()).collect();
    let ys: Vec<f64> = (lo..hi).map(|m| cells_vals[m] * (m * m) as f64).collect();
    let fit = fit_line(&xs, &ys)?;
    let x0 = cutoff as f64 - 0.5;
    let tail = (fit.slope * (x0.ln() + 1.0) + fit.intercept) / x0;
    Some((tail, fit.slope, fit.intercept))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    /// Quadrature up to the cutoff plus the extrapolated tail.
    pub value: f64,
    /// Extrapolated contribution beyond the cutoff (included in `value`).
    pub tail: f64,
    /// Fitted coefficient of `ln h / h²` in the large-`h` decay.
    pub decay_log_coefficient: f64,
    pub a_grid: f64,
    pub s_grid: f64,
    pub h_grid: f64,
    pub h_cutoff: f64,
}

fn integral_value(cov: &[f64], cells: usize, s_nodes: usize, h_nodes: usize) -> Result<(f64, f64, f64, f64)> {
    let per_cell = cell_contributions(cov, cells, s_nodes, h_nodes);
    let (tail, slope, _) = fitted_tail(&per_cell, cells / 2, cells, cells)
        .ok_or_else(|| invalid("cutoff too small for the tail fit"))?;
    let (tail_coarse, _, _) = fitted_tail(&per_cell, cells / 4, cells / 2, cells)
        .ok_or_else(|| invalid("cutoff too small for the tail fit"))?;
    let body = 0.25 * pairwise_sum(&per_cell);
    Ok((body + 0.25 * tail, 0.25 * tail, slope * 0.25, 0.25 * (tail - tail_coarse).abs()))
}

/// `(1/4) ∫∫∫ V(a, s, h)` with the grids halved one at a time to estimate the
/// discretization error of each.
pub fn entropy_integral(h_max: f64, a_nodes: usize, s_nodes: usize, h_nodes: usize) -> Result<IntegralEstimate> {
    if !(h_max >= 50.0) || !h_max.is_finite() {
        return Err(invalid(format!("h_max must be at least 50, got {h_max}")));
    }
    if a_nodes < 16 || s_nodes < 16 || h_nodes < 16 {
        return Err(invalid("node counts must be at least 16"));
    }
    let cells = h_max.floor() as usize;
    let cov = averaged_covariances(cells + 1, a_nodes);
    let (value, tail, slope, h_cutoff) = integral_value(&cov, cells, s_nodes, h_nodes)?;
    let cov_half = averaged_covariances(cells + 1, a_nodes / 2);
    let a_grid = (integral_value(&cov_half, cells, s_nodes, h_nodes)?.0 - value).abs();
    let s_grid = (integral_value(&cov, cells, s_nodes / 2, h_nodes)?.0 - value).abs();
    let h_grid = (integral_value(&cov, cells, s_nodes, h_nodes / 2)?.0 - value).abs();
    Ok(IntegralEstimate {
        value,
        tail,
        decay_log_coefficient: slope,
        a_grid,
        s_grid,
        h_grid,
        h_cutoff,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyConfig {
    pub h_max: f64,
    pub a_nodes: usize,
    pub s_nodes: usize,
    pub h_nodes: usize,
    pub k_max: u64,
    /// Required total budget.
    pub tol: f64,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        Self {
            h_max: 200.0,
            a_nodes: 96,
            s_nodes: 32,
            h_nodes: 400,
            k_max: 200,
            tol: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyBudget {
    pub a_grid: f64,
    pub s_grid: f64,
    pub h_cutoff: f64,
    pub h_grid: f64,
    pub series_k_tail: f64,
    pub series_l_tail: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub integral: f64,
    pub series: f64,
    pub budget: EntropyBudget,
    pub config: EntropyConfig,
}

/// Relative stopping threshold for the inner `l` sums.
const SERIES_TOL: f64 = 1e-16;

pub fn entropy_constant(config: EntropyConfig) -> Result<EntropyEstimate> {
    if !(config.tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let integral = entropy_integral(config.h_max, config.a_nodes, config.s_nodes, config.h_nodes)?;
    let series = entropy_series(config.k_max, SERIES_TOL)?;
    let items = [
        integral.a_grid,
        integral.s_grid,
        integral.h_cutoff,
        integral.h_grid,
        series.k_tail,
        series.l_tail,
    ];
    let budget = EntropyBudget {
        a_grid: items[0],
        s_grid: items[1],
        h_cutoff: items[2],
        h_grid: items[3],
        series_k_tail: items[4],
        series_l_tail: items[5],
        total: items.iter().sum(),
    };
    if budget.total > config.tol {
        return Err(Error::BudgetNotMet {
            what: "entropy constant",
            achieved: budget.total,
            requested: config.tol,
        });
    }
    Ok(EntropyEstimate {
        value: integral.value + series.value,
        integral: integral.value,
        series: series.value,
        budget,
        config,
    })
}
