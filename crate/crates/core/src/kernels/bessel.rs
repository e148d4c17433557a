//! Integer-order Bessel functions `J_m(z)` for real `z >= 0`.
//!
//! Small arguments use the power series; otherwise Miller's backward recurrence
//! normalized by `J_0² + 2 Σ J_k² = 1`, with the sign fixed by
//! `J_0 + 2 Σ J_{2k} = 1`. Error estimates come from repeating the recurrence
//! from a higher start order.

use crate::error::{Error, Result};
use crate::numeric::Evaluated;

const SERIES_MAX_ARG: f64 = 4.0;
const RESCALE: f64 = 1e100;

/// Default start order for a recurrence that must resolve orders up to `order`.
fn start_order(order: usize, z: f64) -> usize {
    let m = (order as f64).max(z);
    (m + 20.0 + 10.0 * m.sqrt()).ceil() as usize
}

/// Power series for `J_m(z)`, returning the value and a bound on the
/// truncation plus rounding error.
fn series(m: usize, z: f64) -> Evaluated {
    let half = 0.5 * z;
    // leading term (z/2)^m / m!
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return Evaluated {
            value: 0.0,
            bound: f64::MIN_POSITIVE,
        };
    }
    let q = -half * half;
    let mut sum = term;
    let mut abs_sum = term.abs();
    let mut k = 0usize;
    loop {
        k += 1;
        term *= q / (k as f64 * (k + m) as f64);
        sum += term;
        abs_sum += term.abs();
        if term.abs() <= 1e-17 * abs_sum {
            break;
        }
    }
    Evaluated {
        value: sum,
        bound: term.abs() + 4.0 * f64::EPSILON * abs_sum,
    }
}

/// Backward recurrence from `start`, returning normalized `J_0..=J_max`.
fn miller(z: f64, max: usize, start: usize) -> Vec<f64> {
    let start = start.max(max + 2);
    let mut vals = vec![0.0; max + 1];
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut sum_sq = 0.0;
    let mut sum_even = 0.0;
    let two_over_z = 2.0 / z;
    for k in (0..=start).rev() {
        if k <= max {
            vals[k] = cur;
        }
        if k == 0 {
            sum_sq += cur * cur;
            sum_even += cur;
        } else {
            sum_sq += 2.0 * cur * cur;
            if k % 2 == 0 {
                sum_even += 2.0 * cur;
            }
            let prev = k as f64 * two_over_z * cur - next;
            next = cur;
            cur = prev;
            if cur.abs() > RESCALE {
                let s = 1.0 / RESCALE;
                cur *= s;
                next *= s;
                sum_sq *= s * s;
                sum_even *= s;
                for v in vals.iter_mut().skip(k) {
                    *v *= s;
                }
            }
        }
    }
    let mut norm = 1.0 / sum_sq.sqrt();
    if sum_even < 0.0 {
        norm = -norm;
    }
    for v in &mut vals {
        *v *= norm;
    }
    vals
}

/// `J_order(arg)` together with an error estimate.
pub fn bessel_j_eval(order: i64, arg: f64, tol: f64) -> Result<Evaluated> {
    if !(arg >= 0.0) || !arg.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Bessel argument must be finite and >= 0, got {arg}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let m = order.unsigned_abs() as usize;
    let sign = if order < 0 && m % 2 == 1 { -1.0 } else { 1.0 };
    if arg == 0.0 {
        return Ok(Evaluated {
            value: if m == 0 { 1.0 } else { 0.0 },
            bound: 0.0,
        });
    }
    let e = if arg <= SERIES_MAX_ARG {
        series(m, arg)
    } else {
        let start = start_order(m, arg);
        let a = miller(arg, m, start)[m];
        let extra = 20 + (start as f64).sqrt() as usize * 5;
        let b = miller(arg, m, start + extra)[m];
        Evaluated {
            value: b,
            bound: (a - b).abs() + 8.0 * f64::EPSILON * b.abs().max(1e-300),
        }
    };
    if e.bound > tol * e.value.abs().max(1.0) {
        return Err(Error::ToleranceUnreachable {
            what: "bessel_j",
            tol,
        });
    }
    Ok(Evaluated {
        value: sign * e.value,
        bound: e.bound,
    })
}

/// `J_order(arg)` to relative accuracy `tol` (absolute for values below 1).
pub fn bessel_j(order: i64, arg: f64, tol: f64) -> Result<f64> {
    bessel_j_eval(order, arg, tol).map(|e| e.value)
}

/// All `J_m(z)` for `0 <= m <= max_order` at a fixed `z`, plus suffix sums of
/// squares `Σ_{j >= m} J_j²`. Orders beyond the table are treated as zero,
/// which is accurate once `max_order` is well past the transition region
/// (see [`BesselTable::for_theta`]).
#[derive(Debug, Clone)]
pub struct BesselTable {
    z: f64,
    values: Vec<f64>,
    tail_sq: Vec<f64>,
    bound: f64,
}

impl BesselTable {
    pub fn new(z: f64, max_order: usize) -> Result<Self> {
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "table argument must be positive, got {z}"
            )));
        }
        let (values, bound) = if z <= SERIES_MAX_ARG {
            let evals: Vec<Evaluated> = (0..=max_order).map(|m| series(m, z)).collect();
            let bound = evals.iter().map(|e| e.bound).fold(0.0, f64::max);
            (evals.into_iter().map(|e| e.value).collect(), bound)
        } else {
            let start = start_order(max_order, z);
            let a = miller(z, max_order, start);
            let b = miller(z, max_order, start + 20 + 5 * (start as f64).sqrt() as usize);
            let bound = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
                + 8.0 * f64::EPSILON;
            (b, bound)
        };
        let mut tail_sq = vec![0.0; values.len() + 1];
        for m in (0..values.len()).rev() {
            tail_sq[m] = tail_sq[m + 1] + values[m] * values[m];
        }
        Ok(Self {
            z,
            values,
            tail_sq,
            bound,
        })
    }

    /// Table for `z = 2θ` reaching far enough past the turning point that the
    /// omitted orders contribute below double precision, and at least to
    /// `min_order`.
    pub fn for_theta(theta: f64, min_order: usize) -> Result<Self> {
        let z = 2.0 * theta;
        let reach = z + 40.0 + 12.0 * z.cbrt();
        Self::new(z, min_order.max(reach.ceil() as usize) + 2)
    }

    pub fn arg(&self) -> f64 {
        self.z
    }

    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    /// Largest discrepancy observed against a deeper recurrence.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `J_m(z)` for any integer `m`.
    pub fn j(&self, m: i64) -> f64 {
        let a = m.unsigned_abs() as usize;
        let v = self.values.get(a).copied().unwrap_or(0.0);
        if m < 0 && a % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// `Σ_{j >= m} J_j²` for `m >= 0`.
    pub fn tail_sq(&self, m: usize) -> f64 {
        self.tail_sq.get(m).copied().unwrap_or(0.0)
    }
}
