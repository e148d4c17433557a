//! Discrete Bessel and sine kernels and the determinantal functionals built
//! from them.

pub mod bessel;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use bessel::{bessel_j, bessel_j_eval, BesselTable};

use crate::error::{invalid, Error, Result};
use crate::numeric::{determinant, Evaluated};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselKernelParams {
    pub theta: f64,
    pub tol: f64,
}

impl BesselKernelParams {
    pub fn new(theta: f64, tol: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(invalid(format!("theta must be positive, got {theta}")));
        }
        if !(tol > 0.0 && tol <= 1e-6) {
            return Err(invalid(format!("kernel tolerance must lie in (0, 1e-6], got {tol}")));
        }
        Ok(Self { theta, tol })
    }

    pub fn with_theta(theta: f64) -> Result<Self> {
        Self::new(theta, DEFAULT_TOL)
    }
}

/// The kernel `𝒥(θ²; x, y)` backed by a precomputed Bessel table.
#[derive(Debug, Clone)]
pub struct BesselKernel {
    params: BesselKernelParams,
    table: BesselTable,
}

impl BesselKernel {
    /// Kernel valid for all arguments; `reach` extends the table beyond its
    /// default size when positions far past the edge are queried.
    pub fn new(params: BesselKernelParams, reach: usize) -> Result<Self> {
        let table = BesselTable::for_theta(params.theta, reach + 2)?;
        if table.bound() > params.tol {
            return Err(Error::ToleranceUnreachable {
                what: "bessel kernel table",
                tol: params.tol,
            });
        }
        Ok(Self { params, table })
    }

    pub fn params(&self) -> BesselKernelParams {
        self.params
    }

    pub fn table(&self) -> &BesselTable {
        &self.table
    }

    /// Off-diagonal entry; `x == y` is rejected.
    pub fn off_diag(&self, x: i64, y: i64) -> Result<f64> {
        if x == y {
            return Err(Error::DiagonalRequested);
        }
        let t = &self.table;
        let num = t.j(x) * t.j(y + 1) - t.j(x + 1) * t.j(y);
        Ok(self.params.theta * num / (x - y) as f64)
    }

    /// `𝒥(x, x) = Σ_{s>=1} J_{x+s}²`.
    pub fn diag(&self, x: i64) -> f64 {
        if x >= 0 {
            self.table.tail_sq(x as usize + 1)
        } else {
            // particle-hole symmetry: 𝒥(x,x) = 1 - 𝒥(-x-1,-x-1)
            (1.0 - self.table.tail_sq(x.unsigned_abs() as usize)).clamp(0.0, 1.0)
        }
    }

    /// Any entry.
    pub fn entry(&self, x: i64, y: i64) -> f64 {
        if x == y {
            self.diag(x)
        } else {
            self.off_diag(x, y).expect("x != y")
        }
    }

    /// Diagonal with its truncation bound: the table bound propagated through
    /// the sum of squares plus the omitted orders (below double precision by
    /// construction of the table).
    pub fn diag_eval(&self, x: i64) -> Evaluated {
        let terms = (self.table.max_order() as f64 - x as f64).clamp(1.0, 1e7);
        Evaluated {
            value: self.diag(x),
            bound: 2.0 * self.table.bound() * terms.sqrt() + f64::EPSILON * terms,
        }
    }
}

fn table_reach(theta: f64, positions: &[i64]) -> usize {
    let far = positions.iter().map(|p| p.unsigned_abs() as usize + 2).max().unwrap_or(0);
    far.max((2.0 * theta) as usize)
}

/// `𝒥(θ²; x, y)` for `x != y`.
pub fn bessel_kernel(p: BesselKernelParams, x: i64, y: i64) -> Result<f64> {
    if x == y {
        return Err(Error::DiagonalRequested);
    }
    BesselKernel::new(p, table_reach(p.theta, &[x, y]))?.off_diag(x, y)
}

/// `𝒥(θ²; x, x)`.
pub fn bessel_kernel_diag(p: BesselKernelParams, x: i64) -> Result<f64> {
    Ok(BesselKernel::new(p, table_reach(p.theta, &[x]))?.diag(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineKernelParams {
    pub a: f64,
}

impl SineKernelParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.abs() < 2.0) {
            return Err(invalid(format!("sine kernel needs |a| < 2, got {a}")));
        }
        Ok(Self { a })
    }

    /// One-point density `arccos(a/2)/π`.
    pub fn density(&self) -> f64 {
        (self.a / 2.0).acos() / PI
    }
}

/// `𝒮(k, a)`.
pub fn sine_kernel(p: SineKernelParams, k: i64) -> f64 {
    let phi = (p.a / 2.0).acos();
    if k == 0 {
        phi / PI
    } else {
        (phi * k as f64).sin() / (PI * k as f64)
    }
}

/// `Cov(ω_i, ω_j)` under the sine process.
pub fn sine_covariance(p: SineKernelParams, i: i64, j: i64) -> f64 {
    if i == j {
        let rho = p.density();
        rho * (1.0 - rho)
    } else {
        let s = sine_kernel(p, i - j);
        -s * s
    }
}

/// Pattern `x + m⃗` of distinct offsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternVector {
    offsets: Vec<i64>,
    base: i64,
}

impl PatternVector {
    pub fn new(offsets: Vec<i64>, base: i64) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::InvalidPattern("pattern needs at least one offset".into()));
        }
        let mut sorted = offsets.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPattern(format!("offsets {offsets:?} are not distinct")));
        }
        Ok(Self { offsets, base })
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn shifted(&self, base: i64) -> Self {
        Self {
            offsets: self.offsets.clone(),
            base,
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.offsets.iter().map(move |m| self.base + m)
    }
}

pub const MAX_PATTERN_LEN: usize = 8;

/// `E[Π ω_{x+m_i}] = det K(x+m_i, x+m_j)` for a determinantal process with
/// kernel `kernel`. Values outside `[-tol, 1+tol]` signal kernel misuse.
pub fn det_expectation(
    kernel: impl Fn(i64, i64) -> f64,
    pattern: &PatternVector,
    tol: f64,
) -> Result<f64> {
    let r = pattern.len();
    if r > MAX_PATTERN_LEN {
        return Err(Error::InvalidPattern(format!(
            "pattern length {r} exceeds {MAX_PATTERN_LEN}"
        )));
    }
    let pos: Vec<i64> = pattern.positions().collect();
    let mut m = Vec::with_capacity(r * r);
    for &x in &pos {
        for &y in &pos {
            m.push(kernel(x, y));
        }
    }
    let value = determinant(m, r);
    if !(value >= -tol && value <= 1.0 + tol) {
        return Err(Error::NotAProbability { value });
    }
    Ok(value)
}

/// Edge margin below which the Debye leading term is refused.
pub const DEBYE_MARGIN: f64 = 0.05;

/// Leading Debye term for `J_x(2θ)` with `cos u = x/(2θ)`:
/// `cos(2θ(sin u - u cos u) - π/4) / √(πθ sin u)`.
pub fn debye_leading(x: i64, theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(invalid(format!("theta must be positive, got {theta}")));
    }
    let edge = 2.0 * theta;
    if x.unsigned_abs() as f64 >= edge * (1.0 - DEBYE_MARGIN) {
        return Err(Error::TooCloseToEdge { order: x, edge });
    }
    let cu = x as f64 / edge;
    let u = cu.acos();
    let su = u.sin();
    Ok((edge * (su - u * cu) - PI / 4.0).cos() / (PI * theta * su).sqrt())
}

/// `|𝒥(x,x) - Σ_{|y-x| <= window} 𝒥(x,y)²|`.
pub fn kernel_fixed_point_residual(p: BesselKernelParams, x: i64, window: i64) -> Result<f64> {
    if window < 0 {
        return Err(invalid("window must be non-negative"));
    }
    let k = BesselKernel::new(p, table_reach(p.theta, &[x - window, x + window]))?;
    Ok(fixed_point_residual_with(&k, x, window))
}

pub fn fixed_point_residual_with(k: &BesselKernel, x: i64, window: i64) -> f64 {
    let d = k.diag(x);
    let mut sum = d * d;
    for y in (x - window)..=(x + window) {
        if y != x {
            let v = k.off_diag(x, y).expect("y != x");
            sum += v * v;
        }
    }
    (d - sum).abs()
}

/// Exponent above 1/6 in the admissible bulk `|x| <= 2√n - n^{1/6 + ε}`.
pub const BESSELMAIN_EXPONENT: f64 = 1.0 / 6.0 + 0.01;

pub fn besselmain_limit(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * nf.sqrt() - nf.powf(BESSELMAIN_EXPONENT)
}

/// `|𝒥(x,x; n) - arccos(x/2√n)/π| (2√n - |x|)` at `θ = √n`.
pub fn besselmain_residual(n: usize, x: i64) -> Result<f64> {
    let k = BesselKernel::new(BesselKernelParams::with_theta((n as f64).sqrt())?, 0)?;
    besselmain_residual_with(&k, n, x)
}

pub fn besselmain_residual_with(k: &BesselKernel, n: usize, x: i64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let limit = besselmain_limit(n);
    if x.unsigned_abs() as f64 > limit {
        return Err(Error::OutsideBulk { x, limit });
    }
    let edge = 2.0 * (n as f64).sqrt();
    let target = (x as f64 / edge).acos() / PI;
    Ok((k.diag(x) - target).abs() * (edge - x.unsigned_abs() as f64))
}

/// `max_{|x| <= √n, 0 <= l <= max_l} |𝒥(x, x+l; n) - 𝒮(l, x/√n)|` at `θ = √n`.
///
/// The bulk position of `x` is `a = x/θ`, so that the sine density
/// `arccos(a/2)/π` matches the one-point function `arccos(x/2θ)/π`.
pub fn sine_limit_gap(n: usize, max_l: i64) -> Result<f64> {
    if n == 0 || max_l < 0 {
        return Err(invalid("sine limit gap needs n >= 1 and max_l >= 0"));
    }
    let theta = (n as f64).sqrt();
    let reach = theta.floor() as i64;
    let k = BesselKernel::new(
        BesselKernelParams::with_theta(theta)?,
        table_reach(theta, &[-reach, reach + max_l]),
    )?;
    let mut worst: f64 = 0.0;
    for x in -reach..=reach {
        let s = SineKernelParams::new(x as f64 / theta)?;
        for l in 0..=max_l {
            worst = worst.max((k.entry(x, x + l) - sine_kernel(s, l)).abs());
        }
    }
    Ok(worst)
}
