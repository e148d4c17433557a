//! Young-diagram combinatorics: validation, hooks, dimensions, exact Plancherel
//! log-probabilities, the Maya (descent) encoding and the deviation of the
//! rotated boundary from the limit shape.
//!
//! Coordinates follow the rotated ("Russian") convention in which every cell is
//! a square of diagonal 2. The boundary `Φ_λ` has slope `-1` on `(k, k+1)`
//! exactly when `k = λ_i - i` for some row `i` (rows counted from 1 and padded
//! by zero-length rows), and `Φ_λ(t) = |t|` away from the diagram.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::log_factorial;

/// A partition of `n`: weakly decreasing positive row lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DiagramRecord", into = "DiagramRecord")]
pub struct YoungDiagram {
    rows: Vec<usize>,
    n: usize,
}

/// Line-record form of a diagram: `{"rows": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramRecord {
    pub rows: Vec<usize>,
}

impl TryFrom<DiagramRecord> for YoungDiagram {
    type Error = Error;

    fn try_from(record: DiagramRecord) -> Result<Self> {
        YoungDiagram::from_rows(record.rows)
    }
}

impl From<YoungDiagram> for DiagramRecord {
    fn from(d: YoungDiagram) -> Self {
        DiagramRecord { rows: d.rows }
    }
}

impl TryFrom<Vec<i64>> for YoungDiagram {
    type Error = Error;

    fn try_from(rows: Vec<i64>) -> Result<Self> {
        if let Some(index) = rows.iter().position(|&r| r <= 0) {
            return Err(Error::NonPositiveRow { index });
        }
        YoungDiagram::from_rows(rows.into_iter().map(|r| r as usize).collect())
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl YoungDiagram {
    pub fn from_rows(rows: Vec<usize>) -> Result<Self> {
        for (index, pair) in rows.windows(2).enumerate() {
            if pair[1] > pair[0] {
                return Err(Error::NonMonotoneRows { index: index + 1 });
            }
        }
        if let Some(index) = rows.iter().position(|&r| r == 0) {
            return Err(Error::NonPositiveRow { index });
        }
        let n = rows.iter().sum();
        Ok(Self { rows, n })
    }

    /// Trusted constructor for row vectors already known to be valid.
    pub(crate) fn from_rows_unchecked(rows: Vec<usize>) -> Self {
        debug_assert!(rows.windows(2).all(|p| p[0] >= p[1]));
        debug_assert!(rows.iter().all(|&r| r > 0));
        let n = rows.iter().sum();
        Self { rows, n }
    }

    pub fn empty() -> Self {
        Self {
            rows: Vec::new(),
            n: 0,
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Number of cells.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of rows, `λ'_1`.
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Length of the first row, `λ_1`.
    pub fn first_row(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }

    /// Transposed diagram.
    pub fn conjugate(&self) -> Self {
        let cols = self.first_row();
        let mut conj = Vec::with_capacity(cols);
        // rows are sorted decreasingly, so the column heights are obtained by a
        // single sweep from the bottom row upwards.
        let mut i = self.rows.len();
        for j in 0..cols {
            while i > 0 && self.rows[i - 1] <= j {
                i -= 1;
            }
            conj.push(i);
        }
        Self {
            rows: conj,
            n: self.n,
        }
    }

    /// Hook lengths of all cells, row by row.
    pub fn hooks(&self) -> impl Iterator<Item = usize> + '_ {
        let conj = self.conjugate().rows;
        self.rows.iter().enumerate().flat_map(move |(i, &len)| {
            let conj = conj.clone();
            (0..len).map(move |j| (len - j) + (conj[j] - i) - 1)
        })
    }

    /// `hist[k]` = number of cells with hook length `k` (`hist[0] = 0`);
    /// the vector has length `n + 1`.
    pub fn hook_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.n + 1];
        let conj = self.conjugate();
        for (i, &len) in self.rows.iter().enumerate() {
            for (j, &height) in conj.rows.iter().enumerate().take(len) {
                hist[(len - j) + (height - i) - 1] += 1;
            }
        }
        hist
    }

    /// Number of cells whose hook length equals `k`.
    pub fn hook_count(&self, k: usize) -> usize {
        if k == 0 || k > self.n {
            return 0;
        }
        self.hook_histogram()[k]
    }

    /// `log dim λ` by the hook length formula.
    pub fn log_dim(&self) -> Result<f64> {
        if self.n == 0 {
            return Err(Error::EmptyDiagram);
        }
        let hist = self.hook_histogram();
        let log_hooks: f64 = hist
            .iter()
            .enumerate()
            .skip(2)
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| c as f64 * (k as f64).ln())
            .sum();
        Ok(log_factorial(self.n as u64) - log_hooks)
    }

    /// `log Pl⁽ⁿ⁾(λ) = 2 log dim λ - log n!`.
    pub fn log_plancherel(&self) -> Result<f64> {
        Ok(2.0 * self.log_dim()? - log_factorial(self.n as u64))
    }

    /// Positions `λ_i - i`, `i = 1..=rows`, in decreasing order.
    pub fn maya_positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, &r)| r as i64 - (i as i64 + 1))
    }

    /// Profile on the default window `[-(rows+2), λ_1+2]`.
    pub fn profile(&self) -> ProfileWindow {
        let lo = -(self.num_rows() as i64) - 2;
        let hi = self.first_row() as i64 + 2;
        self.profile_window(lo, hi)
            .expect("default window always covers the diagram")
    }

    /// Profile on a caller-chosen window.
    pub fn profile_window(&self, lo: i64, hi: i64) -> Result<ProfileWindow> {
        if lo > -(self.num_rows() as i64) - 1 || hi < self.first_row() as i64 || lo > hi {
            return Err(Error::WindowTooNarrow { lo, hi });
        }
        let rows = self.num_rows() as i64;
        let mut bits = vec![0u8; (hi - lo + 1) as usize];
        for k in lo..=-rows - 1 {
            bits[(k - lo) as usize] = 1;
        }
        for pos in self.maya_positions() {
            bits[(pos - lo) as usize] = 1;
        }
        Ok(ProfileWindow { lo, hi, bits })
    }
}

/// The `{0,1}` sequence `c(λ)` restricted to `[lo, hi]`; outside the window
/// `c_k = 1` for `k < lo` and `c_k = 0` for `k > hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileWindow {
    lo: i64,
    hi: i64,
    bits: Vec<u8>,
}

impl ProfileWindow {
    /// Raw window from bits at positions `lo, lo+1, ...`. No consistency checks
    /// beyond shape: operations that depend on the outside rule validate it.
    pub fn from_bits(lo: i64, bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParameter("empty profile window".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter("profile bits must be 0 or 1".into()));
        }
        let hi = lo + bits.len() as i64 - 1;
        Ok(Self { lo, hi, bits })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// `c_k` with the outside rule applied.
    pub fn bit(&self, k: i64) -> u8 {
        if k < self.lo {
            1
        } else if k > self.hi {
            0
        } else {
            self.bits[(k - self.lo) as usize]
        }
    }

    /// A window is consistent with its outside rule when it starts with a 1 and
    /// ends with a 0.
    fn check_edges(&self) -> Result<()> {
        if self.bits[0] != 1 || self.bits[self.bits.len() - 1] != 0 {
            return Err(Error::WindowTooNarrow {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(())
    }

    /// Number of hooks of length `k` computed from the profile alone, via
    /// `h_k = Σ_i (c_i - c_i c_{i-k})`.
    pub fn hook_count(&self, k: usize) -> Result<usize> {
        self.check_edges()?;
        if k == 0 {
            return Ok(0);
        }
        let k = k as i64;
        // c_i (1 - c_{i-k}) vanishes for i < lo (both ones) and for i > hi (c_i = 0).
        Ok((self.lo..=self.hi)
            .filter(|&i| self.bit(i) == 1 && self.bit(i - k) == 0)
            .count())
    }

    /// `Φ_ω` for this sequence, normalized by `Φ_ω(0) = 0`.
    pub fn phi_sequence(&self, t: f64) -> f64 {
        // Φ_ω(k) for integer k by summing slopes from 0.
        let slope = |k: i64| 1.0 - 2.0 * f64::from(self.bit(k));
        let k = t.floor() as i64;
        let mut value = 0.0;
        if k >= 0 {
            for j in 0..k {
                value += slope(j);
            }
        } else {
            for j in k..0 {
                value -= slope(j);
            }
        }
        value + (t - k as f64) * slope(k)
    }

    /// Reconstruct the diagram. Fails when the window does not satisfy the
    /// outside rule or does not have zero charge.
    pub fn to_diagram(&self) -> Result<YoungDiagram> {
        self.check_edges()?;
        // Ones in the window, read from the right, are λ_i - i for i = 1, 2, ...
        let ones: Vec<i64> = (self.lo..=self.hi).rev().filter(|&k| self.bit(k) == 1).collect();
        let mut rows = Vec::new();
        for (idx, &pos) in ones.iter().enumerate() {
            let row = pos + idx as i64 + 1;
            if row < 0 {
                return Err(Error::InvalidParameter("profile has non-zero charge".into()));
            }
            if row == 0 {
                // every remaining one must be the vacuum tail
                let rest_ok = ones[idx..]
                    .iter()
                    .enumerate()
                    .all(|(j, &p)| p + (idx + j) as i64 + 1 == 0);
                if !rest_ok {
                    return Err(Error::InvalidParameter("profile has non-zero charge".into()));
                }
                break;
            }
            rows.push(row as usize);
        }
        if ones.last().map(|&p| p + ones.len() as i64) != Some(0) {
            return Err(Error::InvalidParameter("profile has non-zero charge".into()));
        }
        YoungDiagram::from_rows(rows)
    }
}

/// `h_k(λ)` computed from the profile alone.
pub fn hook_count_via_profile(p: &ProfileWindow, k: usize) -> Result<usize> {
    p.hook_count(k)
}

/// The limit shape `Ω`.
pub fn limit_shape(t: f64) -> f64 {
    if t.abs() >= 2.0 {
        t.abs()
    } else {
        (2.0 / PI) * (t * (t / 2.0).asin() + (4.0 - t * t).sqrt())
    }
}

/// `Φ_λ` and `F_λ(t) = Φ_λ(t) - √n Ω(t/√n)` with the boundary values at
/// integer points precomputed, so point evaluation is O(1).
#[derive(Debug, Clone)]
pub struct DeviationFunction {
    lo: i64,
    hi: i64,
    /// Φ_λ(k) for k = lo..=hi.
    values: Vec<f64>,
    n: usize,
    sqrt_n: f64,
}

impl DeviationFunction {
    /// Boundary of `d`; the limit-shape part is only meaningful for non-empty
    /// diagrams, see [`DeviationFunction::new`].
    pub fn boundary(d: &YoungDiagram) -> Self {
        let lo = -(d.num_rows() as i64);
        let hi = d.first_row() as i64;
        let mut ones = vec![false; (hi - lo).max(0) as usize];
        for pos in d.maya_positions() {
            ones[(pos - lo) as usize] = true;
        }
        let mut values = Vec::with_capacity(ones.len() + 1);
        let mut v = lo.unsigned_abs() as f64;
        values.push(v);
        for &one in &ones {
            v += if one { -1.0 } else { 1.0 };
            values.push(v);
        }
        Self {
            lo,
            hi,
            values,
            n: d.n(),
            sqrt_n: (d.n() as f64).sqrt(),
        }
    }

    pub fn new(d: &YoungDiagram) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        Ok(Self::boundary(d))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sqrt_n(&self) -> f64 {
        self.sqrt_n
    }

    /// Interval outside of which `Φ_λ(t) = |t|`.
    pub fn boundary_support(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// Interval outside of which `F_λ` vanishes.
    pub fn support(&self) -> (f64, f64) {
        let edge = 2.0 * self.sqrt_n;
        ((self.lo as f64).min(-edge), (self.hi as f64).max(edge))
    }

    pub fn phi(&self, t: f64) -> f64 {
        if t <= self.lo as f64 || t >= self.hi as f64 {
            return t.abs();
        }
        let k = t.floor();
        let idx = (k as i64 - self.lo) as usize;
        let left = self.values[idx];
        let right = self.values[idx + 1];
        left + (t - k) * (right - left)
    }

    /// `√n Ω(t/√n)`.
    pub fn limit(&self, t: f64) -> f64 {
        self.sqrt_n * limit_shape(t / self.sqrt_n)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.phi(t) - self.limit(t)
    }

    /// Slope of `Φ_λ` on `(k, k+1)`.
    pub fn phi_slope(&self, k: i64) -> f64 {
        if k < self.lo {
            -1.0
        } else if k >= self.hi {
            1.0
        } else {
            let idx = (k - self.lo) as usize;
            self.values[idx + 1] - self.values[idx]
        }
    }
}

/// `Φ_λ(t)`.
pub fn phi(d: &YoungDiagram, t: f64) -> f64 {
    DeviationFunction::boundary(d).phi(t)
}

/// `F_λ(t)`.
pub fn deviation(d: &YoungDiagram, t: f64) -> Result<f64> {
    Ok(DeviationFunction::new(d)?.eval(t))
}

/// All partitions of `n` in reverse lexicographic order (`[n]` first).
pub fn partitions(n: usize) -> Vec<YoungDiagram> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if rest == 0 {
            out.push(YoungDiagram::from_rows_unchecked(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(rows: &[usize]) -> YoungDiagram {
        YoungDiagram::from_rows(rows.to_vec()).unwrap()
    }

    #[test]
    fn construction_and_errors() {
        assert_eq!(d(&[3, 1]).n(), 4);
        assert_eq!(
            YoungDiagram::from_rows(vec![1, 2]),
            Err(Error::NonMonotoneRows { index: 1 })
        );
        assert_eq!(
            YoungDiagram::try_from(vec![2i64, 0]),
            Err(Error::NonPositiveRow { index: 1 })
        );
        assert_eq!(
            YoungDiagram::try_from(vec![-1i64]),
            Err(Error::NonPositiveRow { index: 0 })
        );
        let e = d(&[]);
        assert_eq!(e.n(), 0);
        assert!(e.is_empty());
    }

    #[test]
    fn conjugates() {
        assert_eq!(d(&[3, 1]).conjugate(), d(&[2, 1, 1]));
        assert_eq!(d(&[1]).conjugate(), d(&[1]));
        assert_eq!(d(&[4, 4]).conjugate(), d(&[2, 2, 2, 2]));
        assert_eq!(d(&[]).conjugate(), d(&[]));
    }

    #[test]
    fn hooks_of_small_diagrams() {
        let mut h: Vec<usize> = d(&[2, 1]).hooks().collect();
        h.sort();
        assert_eq!(h, vec![1, 1, 3]);
        assert_eq!(d(&[2, 1]).hook_count(1), 2);
        assert_eq!(d(&[2, 1]).hook_count(3), 1);
        assert_eq!(d(&[2, 1]).hook_count(2), 0);
        assert_eq!(d(&[1]).hook_count(1), 1);
        assert_eq!(d(&[3, 2, 2]).hook_count(8), 0);
    }

    #[test]
    fn dimensions_and_plancherel() {
        assert_eq!(d(&[5]).log_dim().unwrap(), 0.0);
        assert!((d(&[2, 1]).log_dim().unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!((d(&[2, 2]).log_dim().unwrap() - 2f64.ln()).abs() < 1e-14);
        assert_eq!(d(&[1]).log_plancherel().unwrap(), 0.0);
        assert!((d(&[2, 1]).log_plancherel().unwrap() - (2.0f64 / 3.0).ln()).abs() < 1e-14);
        assert!((d(&[6]).log_plancherel().unwrap() + 720f64.ln()).abs() < 1e-12);
        assert_eq!(d(&[]).log_dim(), Err(Error::EmptyDiagram));
        assert_eq!(d(&[]).log_plancherel(), Err(Error::EmptyDiagram));
    }

    #[test]
    fn profiles_follow_the_maya_rule() {
        let p = d(&[]).profile();
        for k in -6..6 {
            assert_eq!(p.bit(k), u8::from(k <= -1), "k={k}");
        }
        let p = d(&[1]).profile();
        assert_eq!((p.bit(0), p.bit(-1), p.bit(-2), p.bit(-3)), (1, 0, 1, 1));
        assert_eq!(p.bit(1), 0);
        let p = d(&[2, 1]).profile();
        assert_eq!((p.bit(1), p.bit(-1)), (1, 1));
        assert_eq!((p.bit(0), p.bit(-2)), (0, 0));
        assert!((-9..=-3).all(|k| p.bit(k) == 1));
        assert!((2..9).all(|k| p.bit(k) == 0));
    }

    #[test]
    fn profile_window_errors() {
        let dd = d(&[3, 1]);
        assert!(matches!(dd.profile_window(-2, 5), Err(Error::WindowTooNarrow { .. })));
        assert!(matches!(dd.profile_window(-3, 2), Err(Error::WindowTooNarrow { .. })));
        assert!(dd.profile_window(-3, 3).is_ok());
        let raw = ProfileWindow::from_bits(0, vec![0, 1]).unwrap();
        assert!(matches!(raw.hook_count(1), Err(Error::WindowTooNarrow { .. })));
    }

    #[test]
    fn profile_hooks_small_cases() {
        assert_eq!(d(&[2, 1]).profile().hook_count(1).unwrap(), 2);
        assert_eq!(d(&[1]).profile().hook_count(1).unwrap(), 1);
        for k in 1..5 {
            assert_eq!(d(&[]).profile().hook_count(k).unwrap(), 0);
        }
    }

    #[test]
    fn profile_roundtrips_to_diagram() {
        for n in 0..8 {
            for lam in partitions(n) {
                assert_eq!(lam.profile().to_diagram().unwrap(), lam);
            }
        }
    }

    #[test]
    fn limit_shape_values() {
        assert!((limit_shape(0.0) - 4.0 / PI).abs() < 1e-15);
        assert_eq!(limit_shape(2.0), 2.0);
        assert!((limit_shape(2.0 - 1e-12) - 2.0).abs() < 1e-9);
        assert_eq!(limit_shape(-3.0), 3.0);
        for i in -40..=40 {
            let t = i as f64 * 0.1;
            assert!(limit_shape(t) >= t.abs() - 1e-15);
        }
    }

    #[test]
    fn phi_of_single_cell() {
        // rotated unit cell of diagonal 2: peak of height 2 above the origin
        let one = d(&[1]);
        assert_eq!(phi(&one, -1.0), 1.0);
        assert_eq!(phi(&one, 0.0), 2.0);
        assert_eq!(phi(&one, 1.0), 1.0);
        assert_eq!(phi(&one, 5.0), 5.0);
        assert_eq!(phi(&one, -5.0), 5.0);
        for i in -30..30 {
            let t = i as f64 * 0.37;
            assert_eq!(phi(&d(&[]), t), t.abs());
        }
    }

    #[test]
    fn area_between_boundary_and_vee_is_twice_n() {
        for rows in [vec![1], vec![2, 1], vec![4, 2, 2, 1], vec![7]] {
            let dd = d(&rows);
            let f = DeviationFunction::boundary(&dd);
            let (lo, hi) = f.boundary_support();
            // trapezoid rule is exact for a piecewise-linear function with integer kinks
            let area: f64 = (lo..hi)
                .map(|k| 0.5 * (f.phi(k as f64) - (k as f64).abs() + f.phi(k as f64 + 1.0) - (k as f64 + 1.0).abs()))
                .sum();
            assert!((area - 2.0 * dd.n() as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn deviation_values() {
        let one = d(&[1]);
        assert!((deviation(&one, 0.0).unwrap() - (2.0 - 4.0 / PI)).abs() < 1e-15);
        assert_eq!(deviation(&one, 7.0).unwrap(), 0.0);
        let row = d(&[9]);
        assert_eq!(deviation(&row, 10.5).unwrap(), 0.0);
        assert_eq!(deviation(&d(&[]), 0.0), Err(Error::EmptyDiagram));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        let p4: Vec<Vec<usize>> = partitions(4).into_iter().map(|d| d.rows().to_vec()).collect();
        assert_eq!(p4, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
    }

    #[test]
    fn serde_record_roundtrip_and_validation() {
        let dd = d(&[3, 1]);
        let s = serde_json::to_string(&dd).unwrap();
        assert_eq!(s, r#"{"rows":[3,1]}"#);
        let back: YoungDiagram = serde_json::from_str(&s).unwrap();
        assert_eq!(back, dd);
        assert!(serde_json::from_str::<YoungDiagram>(r#"{"rows":[1,3]}"#).is_err());
    }

    fn arb_diagram(max_n: usize) -> impl Strategy<Value = YoungDiagram> {
        prop::collection::vec(1usize..=12, 0..12).prop_map(move |mut rows| {
            rows.sort_unstable_by(|a, b| b.cmp(a));
            let mut total = 0;
            rows.retain(|&r| {
                total += r;
                total <= max_n
            });
            YoungDiagram::from_rows(rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution_preserving_hooks(dd in arb_diagram(40)) {
            let c = dd.conjugate();
            prop_assert_eq!(c.conjugate(), dd.clone());
            prop_assert_eq!(c.hook_histogram(), dd.hook_histogram());
        }

        #[test]
        fn hooks_partition_the_cells(dd in arb_diagram(40)) {
            let total: usize = dd.hook_histogram().iter().sum();
            prop_assert_eq!(total, dd.n());
        }

        #[test]
        fn phi_differs_from_sequence_phi_by_a_constant(dd in arb_diagram(30)) {
            let f = DeviationFunction::boundary(&dd);
            let p = dd.profile();
            let c0 = f.phi(0.0) - p.phi_sequence(0.0);
            for i in 0..100 {
                let t = -40.0 + 0.8 * i as f64 + 0.013;
                prop_assert!((f.phi(t) - p.phi_sequence(t) - c0).abs() < 1e-9);
            }
        }

        #[test]
        fn deviation_is_two_lipschitz(dd in arb_diagram(40), s in -20.0f64..20.0, h in 1e-3f64..5.0) {
            prop_assume!(!dd.is_empty());
            let f = DeviationFunction::new(&dd).unwrap();
            let q = (f.eval(s + h) - f.eval(s)) / h;
            prop_assert!(q.abs() <= 2.0 + 1e-9);
        }

        #[test]
        fn deviation_vanishes_beyond_coarse_support(dd in arb_diagram(40), t in 0.0f64..10.0) {
            prop_assume!(!dd.is_empty());
            let f = DeviationFunction::new(&dd).unwrap();
            let r = dd.first_row() as f64 + dd.num_rows() as f64 + 2.0 * (dd.n() as f64).sqrt();
            prop_assert!(f.eval(r + t + 1e-9).abs() < 1e-12);
            prop_assert!(f.eval(-r - t - 1e-9).abs() < 1e-12);
        }
    }
}
