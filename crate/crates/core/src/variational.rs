//! Terms of the variational formula
//! `-log Pl(λ)/√n = hook + ‖F_λ‖/(8√n) + arccosh term - ε_n`
//! evaluated on a concrete diagram.
//!
//! The seminorm is computed through the logarithmic-energy form
//! `‖F‖ = -2 ∫∫ F'(t) F'(s) log|t - s| dt ds`. Writing
//! `F' = α - β` with `α = Φ'_λ - sign` (piecewise constant on unit cells, with
//! finite support) and `β = Ω'(·/√n) - sign` (supported on `|t| < 2√n`), every
//! piece has a closed form. A direct `(t, h)` quadrature of the defining
//! double integral is kept as an independent route.

use serde::{Deserialize, Serialize};

use crate::entropy::hook_series_weight;
use crate::error::{invalid, Error, Result};
use crate::numeric::{gauss_legendre_on, inverse_square_tail, log_factorial, pairwise_sum};
use crate::young::{DeviationFunction, YoungDiagram};

const WEIGHT_TOL: f64 = 1e-16;

/// `(1/√n) Σ_k h_k(λ) w(k)`.
pub fn hook_term(d: &YoungDiagram) -> Result<f64> {
    if d.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    let hist = d.hook_histogram();
    let terms: Vec<f64> = hist
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| c as f64 * hook_series_weight(k as u64, WEIGHT_TOL))
        .collect();
    Ok(pairwise_sum(&terms) / (d.n() as f64).sqrt())
}

/// `∫_0^1 ∫_0^1 log|d + u - v| du dv`.
fn log_kernel_cell(d: u64) -> f64 {
    match d {
        0 => -1.5,
        1 => 2.0 * std::f64::consts::LN_2 - 1.5,
        // ln d - w(d)/2, with w the hook series weight
        _ => (d as f64).ln() - 0.5 * hook_series_weight(d, WEIGHT_TOL),
    }
}

/// An antiderivative of `V(t) = ∫ β(s) log|t - s| ds` for
/// `β(s) = (2/π) arcsin(s/c) - sign(s)` on `|s| < c`.
fn anti_v(t: f64, c: f64) -> f64 {
    let a = t.abs();
    let t2 = t * t;
    let mut r = t2 * ((0.5 * c).ln() + 1.0) + 0.5 * t2;
    if a > 0.0 {
        r -= t2 * a.ln();
    }
    if a > c {
        let ac = (a / c).acosh();
        r += 2.0 * ((0.5 * t2 + 0.25 * c * c) * ac - 0.75 * a * (t2 - c * c).sqrt());
    }
    r
}

/// Cells `k` (standing for `(k, k+1)`) where `α_k != 0`, with the value.
fn alpha_cells(d: &YoungDiagram) -> Vec<(i64, f64)> {
    let f = DeviationFunction::boundary(d);
    let (lo, hi) = f.boundary_support();
    (lo..hi)
        .filter_map(|k| {
            let sign = if k < 0 { -1.0 } else { 1.0 };
            let a = f.phi_slope(k) - sign;
            (a != 0.0).then_some((k, a))
        })
        .collect()
}

/// `‖F_λ‖_{1/2} = ∫∫ ((F(t) - F(s))/(t - s))² dt ds`.
///
/// Evaluated in closed form up to the hook weights inside the logarithmic
/// kernel, so `quad_tol` only validates the request.
pub fn seminorm_half(d: &YoungDiagram, quad_tol: f64) -> Result<f64> {
    if d.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    if !(quad_tol > 0.0) {
        return Err(invalid("quadrature tolerance must be positive"));
    }
    let c = 2.0 * (d.n() as f64).sqrt();
    let cells = alpha_cells(d);
    let span = match (cells.first(), cells.last()) {
        (Some(a), Some(b)) => (b.0 - a.0) as usize + 1,
        _ => 0,
    };
    let kernel: Vec<f64> = (0..span as u64).map(log_kernel_cell).collect();
    let mut row_sums = Vec::with_capacity(cells.len());
    for &(j, aj) in &cells {
        let s: f64 = cells
            .iter()
            .map(|&(k, ak)| ak * kernel[(j - k).unsigned_abs() as usize])
            .sum();
        row_sums.push(aj * s);
    }
    let t_aa = pairwise_sum(&row_sums);
    let cross: Vec<f64> = cells
        .iter()
        .map(|&(k, ak)| ak * (anti_v(k as f64 + 1.0, c) - anti_v(k as f64, c)))
        .collect();
    let t_ab = pairwise_sum(&cross);
    // ∫∫ β(t)β(s) log|t - s| = -c²
    let t_bb = -c * c;
    Ok((-2.0 * (t_aa - 2.0 * t_ab + t_bb)).max(0.0))
}

/// Panel breakpoints of `t ↦ F(t + h) - F(t)` inside `[a, b]`.
fn breakpoints(a: f64, b: f64, h: f64, kinks: &[f64], out: &mut Vec<f64>) {
    out.clear();
    out.push(a);
    out.push(b);
    let mut k = a.ceil();
    while k < b {
        out.push(k);
        k += 1.0;
    }
    let mut k = (a + h).ceil();
    while k - h < b {
        out.push(k - h);
        k += 1.0;
    }
    for &x in kinks {
        for y in [x, x - h] {
            if y > a && y < b {
                out.push(y);
            }
        }
    }
    out.sort_unstable_by(f64::total_cmp);
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
}

struct DirectQuadrature<'a> {
    f: &'a DeviationFunction,
    lo: f64,
    hi: f64,
    kinks: [f64; 2],
    t_rule: (Vec<f64>, Vec<f64>),
    h_rule: (Vec<f64>, Vec<f64>),
}

impl<'a> DirectQuadrature<'a> {
    fn new(f: &'a DeviationFunction, t_order: usize, h_order: usize) -> Self {
        let (lo, hi) = f.support();
        let c = 2.0 * f.sqrt_n();
        Self {
            f,
            lo,
            hi,
            kinks: [-c, c],
            t_rule: gauss_legendre_on(t_order, 0.0, 1.0),
            h_rule: gauss_legendre_on(h_order, 0.0, 1.0),
        }
    }

    fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `G(h) = ∫ (F(t+h) - F(t))² dt`.
    fn g(&self, h: f64, scratch: &mut Vec<f64>) -> f64 {
        breakpoints(self.lo - h, self.hi, h, &self.kinks, scratch);
        let (x, w) = &self.t_rule;
        let mut total = 0.0;
        for p in scratch.windows(2) {
            let len = p[1] - p[0];
            if len <= 0.0 {
                continue;
            }
            let mut acc = 0.0;
            for (xi, wi) in x.iter().zip(w) {
                let t = p[0] + len * xi;
                let diff = self.f.eval(t + h) - self.f.eval(t);
                acc += wi * diff * diff;
            }
            total += acc * len;
        }
        total
    }

    /// `∫ F²`.
    fn l2(&self, scratch: &mut Vec<f64>) -> f64 {
        breakpoints(self.lo, self.hi, 0.0, &self.kinks, scratch);
        let (x, w) = &self.t_rule;
        let mut total = 0.0;
        for p in scratch.windows(2) {
            let len = p[1] - p[0];
            let acc: f64 = x
                .iter()
                .zip(w)
                .map(|(xi, wi)| wi * self.f.eval(p[0] + len * xi).powi(2))
                .sum();
            total += acc * len;
        }
        total
    }

    /// `2 ∫_{h_a}^{h_b} G(h)/h² dh` on unit panels aligned with the integers.
    fn band(&self, h_a: f64, h_b: f64) -> f64 {
        let mut scratch = Vec::new();
        let (x, w) = &self.h_rule;
        let mut total = 0.0;
        let mut start = h_a;
        while start < h_b {
            let end = (start.floor() + 1.0).min(h_b);
            let len = end - start;
            let mut acc = 0.0;
            for (xi, wi) in x.iter().zip(w) {
                let h = start + len * xi;
                acc += wi * self.g(h, &mut scratch) / (h * h);
            }
            total += acc * len;
            start = end;
        }
        2.0 * total
    }

    /// `2 ∫_{h_a}^∞ G(h)/h² dh`, using `G(h) = 2 ∫F²` once the shifted
    /// supports no longer overlap.
    fn band_to_infinity(&self, h_a: f64) -> f64 {
        let w = self.width();
        if h_a >= w {
            let mut scratch = Vec::new();
            return 4.0 * self.l2(&mut scratch) / h_a;
        }
        let mut scratch = Vec::new();
        self.band(h_a, w) + 4.0 * self.l2(&mut scratch) / w
    }
}

/// Quadrature levels `(t order, h order)`; each level is checked against the next.
const LEVELS: [(usize, usize); 4] = [(3, 3), (5, 5), (8, 8), (12, 12)];

fn refine(what: &'static str, quad_tol: f64, scale: f64, eval: impl Fn(usize, usize) -> f64) -> Result<(f64, f64)> {
    let mut prev = eval(LEVELS[0].0, LEVELS[0].1);
    let mut best_err = f64::INFINITY;
    for &(qt, qh) in &LEVELS[1..] {
        let cur = eval(qt, qh);
        let err = (cur - prev).abs();
        best_err = err;
        if err <= quad_tol * scale {
            return Ok((cur, err));
        }
        prev = cur;
    }
    Err(Error::BudgetNotMet {
        what,
        achieved: best_err / scale,
        requested: quad_tol,
    })
}

/// Direct `(t, h)` quadrature of `‖F_λ‖_{1/2}`, with an error estimate from
/// successive refinement. Slow; meant as a cross-check.
pub fn seminorm_half_direct(d: &YoungDiagram, quad_tol: f64) -> Result<(f64, f64)> {
    let f = DeviationFunction::new(d)?;
    let scale = seminorm_half(d, quad_tol)?.max(1e-300);
    refine("direct seminorm quadrature", quad_tol, scale, |qt, qh| {
        DirectQuadrature::new(&f, qt, qh).band_to_infinity(0.0)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormSplit {
    /// `2 ∫_0^{h0} ∫ ((F(t+h) - F(t))/h)² dt dh`.
    pub local: f64,
    /// `2 ∫_{h0}^∞ ∫ ((F(t+h) - F(t))/h)² dt dh`.
    pub tail: f64,
    /// Combined quadrature error estimate of the two parts.
    pub bound: f64,
}

/// Splits the seminorm at `h0`, integrating both parts independently.
pub fn seminorm_split(d: &YoungDiagram, h0: f64, quad_tol: f64) -> Result<SeminormSplit> {
    if !(h0 > 0.0) {
        return Err(invalid(format!("h0 must be positive, got {h0}")));
    }
    let f = DeviationFunction::new(d)?;
    let scale = seminorm_half(d, quad_tol)?.max(1e-300);
    let (local, e1) = refine("seminorm local part", quad_tol, scale, |qt, qh| {
        let q = DirectQuadrature::new(&f, qt, qh);
        q.band(0.0, h0.min(q.width()).max(0.0)) + if h0 > q.width() {
            // beyond the support width G is constant
            let mut s = Vec::new();
            4.0 * q.l2(&mut s) * (1.0 / q.width() - 1.0 / h0)
        } else {
            0.0
        }
    })?;
    let (tail, e2) = refine("seminorm tail", quad_tol, scale, |qt, qh| {
        DirectQuadrature::new(&f, qt, qh).band_to_infinity(h0)
    })?;
    Ok(SeminormSplit {
        local,
        tail,
        bound: e1 + e2,
    })
}

/// `∫_u1^u2 (p + q u) arccosh(u/c) du` for `c <= u1 <= u2`.
fn linear_times_arccosh(p: f64, q: f64, u1: f64, u2: f64, c: f64) -> f64 {
    let prim = |u: f64| {
        let ac = (u / c).max(1.0).acosh();
        let root = (u * u - c * c).max(0.0).sqrt();
        let p1 = u * ac - root;
        let p2 = (0.5 * u * u - 0.25 * c * c) * ac - 0.25 * u * root;
        p * p1 + q * p2
    };
    prim(u2) - prim(u1)
}

/// `(1/√n) ∫_{|t| >= 2√n} F_λ(t) arccosh(|t|/(2√n)) dt`.
pub fn arccosh_tail_term(d: &YoungDiagram) -> Result<f64> {
    let f = DeviationFunction::new(d)?;
    let c = 2.0 * f.sqrt_n();
    let (lo, hi) = f.boundary_support();
    let mut pieces = Vec::new();
    // right side: F = Φ - t, linear on unit cells, zero beyond λ_1
    let mut k = c.floor() as i64;
    while k < hi {
        let a = (k as f64).max(c);
        let b = k as f64 + 1.0;
        if b > a {
            let fa = f.phi(a) - a;
            let fb = f.phi(b) - b;
            let q = (fb - fa) / (b - a);
            pieces.push(linear_times_arccosh(fa - q * a, q, a, b, c));
        }
        k += 1;
    }
    // left side in u = -t: F(-u) = Φ(-u) - u, zero beyond the number of rows
    let mut k = c.floor() as i64;
    while k < -lo {
        let a = (k as f64).max(c);
        let b = k as f64 + 1.0;
        if b > a {
            let fa = f.phi(-a) - a;
            let fb = f.phi(-b) - b;
            let q = (fb - fa) / (b - a);
            pieces.push(linear_times_arccosh(fa - q * a, q, a, b, c));
        }
        k += 1;
    }
    Ok(pairwise_sum(&pieces) / f.sqrt_n() + 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VKDecomposition {
    pub n: usize,
    /// `-log Pl(λ)/√n`.
    pub lhs: f64,
    pub hook_term: f64,
    /// `‖F_λ‖_{1/2}/(8√n)`.
    pub seminorm_term: f64,
    pub arccosh_term: f64,
    /// `lhs - hook_term - seminorm_term - arccosh_term`; the formula's `ε_n`
    /// is the negative of this.
    pub residual: f64,
}

pub fn vk_decompose(d: &YoungDiagram, quad_tol: f64) -> Result<VKDecomposition> {
    let sqrt_n = (d.n() as f64).sqrt();
    let lhs = -d.log_plancherel()? / sqrt_n;
    let hook = hook_term(d)?;
    let seminorm_term = seminorm_half(d, quad_tol)? / (8.0 * sqrt_n);
    let arccosh_term = arccosh_tail_term(d)?;
    let residual = lhs - hook - seminorm_term - arccosh_term;
    Ok(VKDecomposition {
        n: d.n(),
        lhs,
        hook_term: hook,
        seminorm_term,
        arccosh_term,
        residual,
    })
}

/// `-(ln n! - n ln n + n)/√n`: the value the residual takes for every
/// diagram with `n` cells.
pub fn residual_reference(n: usize) -> f64 {
    let nf = n as f64;
    -(log_factorial(n as u64) - nf * nf.ln() + nf) / nf.sqrt()
}

/// Discrete majorant of the continuous seminorm tail together with the
/// allowance `ε` it carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteTail {
    /// `(4/√n) Σ_{l > h0-1} Σ_k ((F^{(L,δ)}(k+l) - F^{(L,δ)}(k))/l)²`.
    pub value: f64,
    /// Allowance for the inequality, from the constants of the discretization.
    pub epsilon: f64,
    /// Whether `λ_1, λ'_1 <= 2√n + K n^δ`, the domain where the majorant holds.
    pub in_domain: bool,
    /// Cut radius `2√n - L n^δ`.
    pub cut: f64,
}

impl DiscreteTail {
    pub fn majorant(&self) -> f64 {
        self.value + self.epsilon
    }
}

pub fn discretized_seminorm_tail(d: &YoungDiagram, h0: f64, l_cut: f64, delta: f64, k_edge: f64) -> Result<DiscreteTail> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(invalid(format!("delta must lie in (0, 1/4), got {delta}")));
    }
    if !(h0 > 1.0) {
        return Err(invalid(format!("h0 must exceed 1, got {h0}")));
    }
    if !(l_cut > 0.0) || !(k_edge > 0.0) {
        return Err(invalid("L and K must be positive"));
    }
    let f = DeviationFunction::new(d)?;
    let nf = d.n() as f64;
    let sqrt_n = f.sqrt_n();
    let nd = nf.powf(delta);
    let cut = 2.0 * sqrt_n - l_cut * nd;
    let r = cut.floor().max(-1.0) as i64;
    // F^{(L,δ)} at integers -r..=r
    let vals: Vec<f64> = if r >= 0 { (-r..=r).map(|k| f.eval(k as f64)).collect() } else { Vec::new() };
    let at = |k: i64| -> f64 {
        if k < -r || k > r {
            0.0
        } else {
            vals[(k + r) as usize]
        }
    };
    let l_min = (h0 - 1.0).floor() as i64 + 1;
    let l_max = 2 * r.max(0) + 1;
    let mut per_l = Vec::new();
    for l in l_min.max(1)..=l_max {
        let s: f64 = ((-r - l)..=r).map(|k| (at(k + l) - at(k)).powi(2)).sum();
        per_l.push(s / (l * l) as f64);
    }
    // beyond l_max the supports of F(·+l) and F do not overlap
    let sq: f64 = vals.iter().map(|v| v * v).sum();
    let start = (l_max.max(l_min - 1)) as u64;
    per_l.push(2.0 * sq * inverse_square_tail(start));
    let value = 4.0 / sqrt_n * pairwise_sum(&per_l);
    let kl = k_edge + l_cut;
    let epsilon = 40.0 * (1.0 / (h0 - 1.0) + 1.0 / (h0 - 1.0).powi(2))
        + 2.0 / sqrt_n * (8.0 * (kl + 2.0) * nd * nd + 128.0 * kl.powi(3) * (nd * nd + nd));
    let edge = 2.0 * sqrt_n + k_edge * nd;
    let in_domain = d.first_row() as f64 <= edge && d.num_rows() as f64 <= edge;
    Ok(DiscreteTail {
        value,
        epsilon,
        in_domain,
        cut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_plancherel, SeededRng};
    use crate::young::partitions;
    use std::f64::consts::{LN_2, PI};

    fn d(rows: &[usize]) -> YoungDiagram {
        YoungDiagram::from_rows(rows.to_vec()).unwrap()
    }

    #[test]
    fn hook_term_examples() {
        let w1 = 3.0 - 4.0 * LN_2;
        assert!((hook_term(&d(&[1])).unwrap() - w1).abs() < 1e-15);
        let w3 = hook_series_weight(3, 1e-16);
        let want = (2.0 * w1 + w3) / 3f64.sqrt();
        assert!((hook_term(&d(&[2, 1])).unwrap() - want).abs() < 1e-15);
        assert_eq!(hook_term(&d(&[])), Err(Error::EmptyDiagram));
    }

    #[test]
    fn log_kernel_cells_match_second_differences() {
        let g2 = |x: f64| if x == 0.0 { 0.0 } else { 0.5 * x * x * x.abs().ln() - 0.75 * x * x };
        for dd in 0..30u64 {
            let x = dd as f64;
            let direct = g2(x + 1.0) - 2.0 * g2(x) + g2(x - 1.0);
            assert!((log_kernel_cell(dd) - direct).abs() < 1e-12, "d={dd}");
        }
    }

    #[test]
    fn anti_v_derivative_matches_potential() {
        // V(t) = ∫ β(s) log|t - s| ds by brute quadrature, against a central difference
        let c = 2.0 * 7f64.sqrt();
        let beta = |s: f64| 2.0 / PI * (s / c).asin() - s.signum();
        let (x, w) = gauss_legendre_on(40, 0.0, 1.0);
        for &t in &[0.37f64, 2.2, -4.1, 6.5, -9.0] {
            let mut v = 0.0;
            let mut pts = vec![-c, 0.0, c];
            if t.abs() < c {
                pts.push(t);
            }
            pts.sort_by(f64::total_cmp);
            for p in pts.windows(2) {
                // geometric grading towards the endpoints handles the log singularity
                let len = p[1] - p[0];
                for piece in 0..24 {
                    let (a, b) = (piece as f64 / 24.0, (piece + 1) as f64 / 24.0);
                    for (xi, wi) in x.iter().zip(&w) {
                        let s = p[0] + len * (a + (b - a) * xi);
                        v += wi * (b - a) * len * beta(s) * (t - s).abs().ln();
                    }
                }
            }
            let e = 1e-5;
            let dv = (anti_v(t + e, c) - anti_v(t - e, c)) / (2.0 * e);
            assert!((dv - v).abs() < 2e-4, "t={t}: {dv} vs {v}");
        }
    }

    #[test]
    fn seminorm_agrees_with_direct_quadrature() {
        for rows in [vec![1], vec![2, 1], vec![3, 1], vec![5, 3, 3, 1], vec![9], vec![4, 4, 4, 4]] {
            let dd = d(&rows);
            let analytic = seminorm_half(&dd, 1e-4).unwrap();
            let (direct, err) = seminorm_half_direct(&dd, 1e-6).unwrap();
            assert!((analytic - direct).abs() < 1e-5 * analytic.max(1.0) + 2.0 * err, "{rows:?}: {analytic} vs {direct}");
        }
        let mut rng = SeededRng::new(11, 0);
        for _ in 0..3 {
            let dd = sample_plancherel(150, &mut rng).unwrap();
            let analytic = seminorm_half(&dd, 1e-4).unwrap();
            let (direct, _) = seminorm_half_direct(&dd, 1e-5).unwrap();
            assert!((analytic - direct).abs() < 1e-4 * analytic, "{analytic} vs {direct}");
        }
    }

    #[test]
    fn seminorm_of_single_cell_is_frozen() {
        // dense midpoint grids at spacings 4e-3, 2e-3, 1e-3 extrapolate to 6.1807079;
        // the grid error is about 2e-6 at that spacing
        let v = seminorm_half(&d(&[1]), 1e-4).unwrap();
        assert!((v - 6.1807079).abs() < 5e-6);
        assert!((v - 6.180709777918).abs() < 1e-10);
    }

    #[test]
    fn seminorm_conjugation_symmetric() {
        let mut rng = SeededRng::new(2, 0);
        for _ in 0..5 {
            let dd = sample_plancherel(300, &mut rng).unwrap();
            let a = vk_decompose(&dd, 1e-4).unwrap();
            let b = vk_decompose(&dd.conjugate(), 1e-4).unwrap();
            assert!((a.seminorm_term - b.seminorm_term).abs() < 1e-9);
            assert!((a.hook_term - b.hook_term).abs() < 1e-12);
            assert!((a.arccosh_term - b.arccosh_term).abs() < 1e-9);
            assert!((a.lhs - b.lhs).abs() < 1e-12);
        }
    }

    #[test]
    fn split_parts_add_up() {
        let mut rng = SeededRng::new(4, 1);
        let dd = sample_plancherel(400, &mut rng).unwrap();
        let total = seminorm_half(&dd, 1e-4).unwrap();
        for h0 in [0.5, 5.0, 50.0, 500.0] {
            let s = seminorm_split(&dd, h0, 1e-5).unwrap();
            assert!((s.local + s.tail - total).abs() < 2e-5 * total, "h0={h0}");
        }
        let far = seminorm_split(&dd, 1e6, 1e-5).unwrap();
        assert!(far.tail < 1e-3 * total);
        let near = seminorm_split(&dd, 1e-3, 1e-5).unwrap();
        assert!(near.local < 1e-2 * total);
    }

    #[test]
    fn arccosh_term_against_quadrature() {
        for rows in [vec![1], vec![2], vec![7, 1], vec![1, 1, 1, 1, 1], vec![12, 3, 1]] {
            let dd = d(&rows);
            let f = DeviationFunction::new(&dd).unwrap();
            let c = 2.0 * f.sqrt_n();
            let (x, w) = gauss_legendre_on(30, 0.0, 1.0);
            let mut q = 0.0;
            let reach = dd.first_row().max(dd.num_rows()) as f64 + 1.0;
            // unit panels starting at c; u = a + (b - a) x² absorbs the square-root
            // behaviour of arccosh at c
            let mut a = c;
            while a < reach {
                let b = (a.floor() + 1.0).min(reach);
                for (xi, wi) in x.iter().zip(&w) {
                    let u = a + (b - a) * xi * xi;
                    let ac = (u / c).acosh();
                    q += wi * 2.0 * xi * (b - a) * (f.eval(u) + f.eval(-u)) * ac;
                }
                a = b;
            }
            let want = q / f.sqrt_n();
            let got = arccosh_tail_term(&dd).unwrap();
            assert!((got - want).abs() < 1e-10, "{rows:?}: {got} vs {want}");
        }
        // nothing sticks out beyond 2√n
        let dd = d(&[3, 2, 1]);
        assert_eq!(arccosh_tail_term(&dd).unwrap(), 0.0);
    }

    #[test]
    fn residual_is_a_function_of_n_only() {
        for n in 1..=9 {
            let want = residual_reference(n);
            for lam in partitions(n) {
                let v = vk_decompose(&lam, 1e-4).unwrap();
                assert!((v.residual - want).abs() < 1e-10, "{lam}: {} vs {want}", v.residual);
                assert_eq!(v.lhs - v.hook_term - v.seminorm_term - v.arccosh_term - v.residual, 0.0);
            }
        }
        assert!((residual_reference(1) + 1.0).abs() < 1e-15);
        assert!((residual_reference(2) + (2.0 - LN_2) / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn residual_reference_on_samples() {
        let mut rng = SeededRng::new(8, 3);
        for n in [50usize, 500, 2000] {
            let dd = sample_plancherel(n, &mut rng).unwrap();
            let v = vk_decompose(&dd, 1e-4).unwrap();
            assert!((v.residual - residual_reference(n)).abs() < 1e-8, "n={n}");
            assert!(v.hook_term > 0.0 && v.seminorm_term >= 0.0);
        }
    }

    #[test]
    fn discrete_majorant_dominates() {
        let mut rng = SeededRng::new(21, 0);
        for i in 0..20 {
            let n = 100 + 31 * i;
            let dd = sample_plancherel(n, &mut rng).unwrap();
            let h0 = 5.0;
            let cont = seminorm_split(&dd, h0, 1e-4).unwrap().tail / (2.0 * (n as f64).sqrt());
            let disc = discretized_seminorm_tail(&dd, h0, 1.0, 0.2, 3.0).unwrap();
            assert!(cont <= disc.majorant(), "n={n}");
        }
        assert!(discretized_seminorm_tail(&d(&[2, 1]), 0.5, 1.0, 0.2, 1.0).is_err());
        assert!(discretized_seminorm_tail(&d(&[2, 1]), 3.0, 1.0, 0.3, 1.0).is_err());
    }

    #[test]
    fn discrete_tail_ignores_cut_region_and_flags_domain() {
        // a long first row lies outside Y_n(K, δ) for small K
        let mut rows = vec![60];
        rows.extend(std::iter::repeat(1).take(40));
        let dd = d(&rows);
        let t = discretized_seminorm_tail(&dd, 3.0, 1.0, 0.2, 0.5).unwrap();
        assert!(!t.in_domain);
        assert!(t.value.is_finite());
        // with a cut covering everything the majorant reduces to ε
        let all_cut = discretized_seminorm_tail(&dd, 3.0, 100.0, 0.2, 0.5).unwrap();
        assert_eq!(all_cut.value, 0.0);
    }
}
