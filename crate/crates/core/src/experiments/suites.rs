use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use statrs::statistics::{Data, Median, OrderStatistics};

use super::{maya_bits, ExperimentReport, RunOptions, StatRecord, Summary};
use crate::error::{invalid, Error, Result};
use crate::kernels::{det_expectation, sine_kernel, BesselKernel, BesselKernelParams, PatternVector, SineKernelParams};
use crate::numeric::{gauss_legendre_on, pairwise_sum};
use crate::sampler::{sample_plancherel, sample_poissonized};
use crate::variational::{seminorm_split, vk_decompose, VKDecomposition};
use crate::young::{DeviationFunction, YoungDiagram};

use super::report::Environment;

fn report(experiment: &str, opts: &RunOptions, parameters: serde_json::Value, statistics: Vec<StatRecord>) -> ExperimentReport {
    ExperimentReport {
        experiment: experiment.to_string(),
        seed: opts.seed,
        parameters,
        statistics,
        environment: Environment::current(opts.workers),
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(msg()))
    }
}

/// Exact integer accumulation over samples; the result does not depend on the
/// order in which partial sums are combined.
fn sum_samples(opts: &RunOptions, count: usize, width: usize, f: impl Fn(u64, &mut [u64]) -> Result<()> + Sync + Send) -> Result<Vec<u64>> {
    opts.install(|| {
        (0..count as u64)
            .into_par_iter()
            .try_fold(
                || vec![0u64; width],
                |mut acc, i| {
                    f(i, &mut acc)?;
                    Ok::<_, Error>(acc)
                },
            )
            .try_reduce(
                || vec![0u64; width],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    Ok(a)
                },
            )
    })
}

/// `-log Pl(λ)/√n` per sample, summarized per `n`.
pub fn run_entropy_convergence(ns: &[usize], count: usize, opts: &RunOptions) -> Result<ExperimentReport> {
    const ID: &str = "entropy_convergence";
    require(ns.iter().all(|&n| n >= 100), || "each n must be at least 100".into())?;
    require(count >= 10, || "count must be at least 10".into())?;
    let mut stats = Vec::new();
    for &n in ns {
        let id = format!("{ID}/n={n}");
        let values = opts.map_samples(count, |i| {
            let d = sample_plancherel(n, &mut opts.rng(&id, i))?;
            Ok(-d.log_plancherel()? / (n as f64).sqrt())
        })?;
        let s = Summary::of(&values);
        let nf = n as f64;
        stats.push(StatRecord::new("neg_log_pl_per_sqrt_n", nf, s.mean, Some(s.stderr), count));
        // standard error of a normal sample's standard deviation
        stats.push(StatRecord::new("sample_std", nf, s.std, Some(s.std / (2.0 * (count as f64 - 1.0)).sqrt()), count));
        stats.push(StatRecord::new("min", nf, s.min, None, count));
        stats.push(StatRecord::new("max", nf, s.max, None, count));
    }
    Ok(report(ID, opts, json!({"ns": ns, "count": count}), stats))
}

/// `32k²/((4k²-1)π²)`.
pub fn hook_frequency_limit(k: usize) -> f64 {
    let k2 = (k * k) as f64;
    32.0 * k2 / ((4.0 * k2 - 1.0) * PI * PI)
}

/// Mean of `h_k(λ)/√n` for each requested `k`.
pub fn run_hook_frequencies(ks: &[usize], n: usize, count: usize, opts: &RunOptions) -> Result<ExperimentReport> {
    const ID: &str = "hook_frequencies";
    require(n >= 400, || "n must be at least 400".into())?;
    require(count >= 2, || "count must be at least 2".into())?;
    require(ks.iter().all(|&k| k >= 1), || "hook lengths start at 1".into())?;
    let per_sample = opts.map_samples(count, |i| {
        let d = sample_plancherel(n, &mut opts.rng(ID, i))?;
        let hist = d.hook_histogram();
        Ok(ks.iter().map(|&k| hist.get(k).copied().unwrap_or(0) as f64 / (n as f64).sqrt()).collect::<Vec<_>>())
    })?;
    let stats = ks
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let col: Vec<f64> = per_sample.iter().map(|v| v[j]).collect();
            let s = Summary::of(&col);
            StatRecord::new(format!("hooks_per_sqrt_n[k={k}]"), n as f64, s.mean, Some(s.stderr), count)
                .with_target(hook_frequency_limit(k))
        })
        .collect();
    Ok(report(ID, opts, json!({"ks": ks, "n": n, "count": count}), stats))
}

/// A pattern `m⃗` and a weight `f` on `[-2, 2]` given by a node/value table
/// (linear in between, zero outside the nodes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternFrequencySpec {
    offsets: Vec<i64>,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl PatternFrequencySpec {
    pub fn new(offsets: Vec<i64>, nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        PatternVector::new(offsets.clone(), 0)?;
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(invalid("weight table needs at least two nodes and one value per node"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes[0] < -2.0 || nodes[nodes.len() - 1] > 2.0 {
            return Err(invalid("weight nodes must increase strictly within [-2, 2]"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("weight values must be finite"));
        }
        Ok(Self { offsets, nodes, values })
    }

    /// `f ≡ 1` on `[-2, 2]`.
    pub fn constant(offsets: Vec<i64>) -> Result<Self> {
        Self::new(offsets, vec![-2.0, 2.0], vec![1.0, 1.0])
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn weight(&self, a: f64) -> f64 {
        let (first, last) = (self.nodes[0], self.nodes[self.nodes.len() - 1]);
        if a < first || a > last {
            return 0.0;
        }
        let i = self.nodes.partition_point(|&x| x <= a).clamp(1, self.nodes.len() - 1);
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        y0 + (a - x0) / (x1 - x0) * (y1 - y0)
    }
}

/// `∫_{-2}^{2} f(a) det(𝒮(m_i - m_j, a)) da`, in the variable `a = 2 cos φ`
/// with panels split at the weight nodes.
pub fn pattern_target(spec: &PatternFrequencySpec) -> Result<f64> {
    let pattern = PatternVector::new(spec.offsets.clone(), 0)?;
    let mut cuts: Vec<f64> = spec.nodes.iter().map(|&a| (a / 2.0).clamp(-1.0, 1.0).acos()).collect();
    cuts.extend([0.0, PI]);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = Vec::new();
    for w in cuts.windows(2) {
        let (x, wt) = gauss_legendre_on(48, w[0], w[1]);
        for (phi, wi) in x.into_iter().zip(wt) {
            let a = 2.0 * phi.cos();
            let f = spec.weight(a);
            if f == 0.0 {
                continue;
            }
            let p = SineKernelParams::new(a)?;
            let det = det_expectation(|i, j| sine_kernel(p, i - j), &pattern, 1e-12)?;
            total.push(wi * 2.0 * phi.sin() * f * det);
        }
    }
    Ok(pairwise_sum(&total))
}

/// Monte-Carlo mean of `(1/√n) Σ_k f(k/√n) c_{k+m⃗}(λ)` against its limit.
pub fn run_pattern_frequency(spec: &PatternFrequencySpec, n: usize, count: usize, opts: &RunOptions) -> Result<ExperimentReport> {
    const ID: &str = "pattern_frequency";
    require(n >= 400, || "n must be at least 400".into())?;
    require(count >= 2, || "count must be at least 2".into())?;
    let sqrt_n = (n as f64).sqrt();
    let reach = (2.0 * sqrt_n).ceil() as i64;
    let spread = spec.offsets.iter().map(|m| m.abs()).max().unwrap_or(0);
    let (lo, hi) = (-reach - spread, reach + spread);
    let values = opts.map_samples(count, |i| {
        let d = sample_plancherel(n, &mut opts.rng(ID, i))?;
        let bits = maya_bits(&d, lo, hi);
        let terms: Vec<f64> = (-reach..=reach)
            .filter(|&k| spec.offsets.iter().all(|m| bits[(k + m - lo) as usize]))
            .map(|k| spec.weight(k as f64 / sqrt_n))
            .collect();
        Ok(pairwise_sum(&terms) / sqrt_n)
    })?;
    let s = Summary::of(&values);
    let stats = vec![StatRecord::new("pattern_average", n as f64, s.mean, Some(s.stderr), count).with_target(pattern_target(spec)?)];
    Ok(report(ID, opts, json!({"pattern": spec, "n": n, "count": count}), stats))
}

/// Consecutive-run patterns `{x, ..., x+r-1}` inside the window, for `r <= max_order`.
fn window_patterns(lo: i64, hi: i64, max_order: usize) -> Vec<(usize, i64)> {
    (1..=max_order)
        .flat_map(|r| (lo..=hi - r as i64 + 1).map(move |x| (r, x)))
        .collect()
}

/// Empirical `E[c_x ··· c_{x+r-1}]` of the poissonized measure against the
/// Bessel-kernel determinant, for every consecutive run in `window`.
pub fn run_boo_correlations(theta: f64, window: (i64, i64), max_order: usize, count: usize, opts: &RunOptions) -> Result<ExperimentReport> {
    const ID: &str = "boo_correlations";
    require(theta >= 5.0, || "theta must be at least 5".into())?;
    let (lo, hi) = window;
    let limit = 2.0 * theta + 5.0 * theta.cbrt();
    require(lo <= hi && (lo.abs().max(hi.abs()) as f64) <= limit, || format!("window must lie within |x| <= {limit:.2}"))?;
    require((1..=crate::kernels::MAX_PATTERN_LEN).contains(&max_order), || "max_order must be between 1 and 8".into())?;
    require(count >= 2, || "count must be at least 2".into())?;
    let patterns = window_patterns(lo, hi, max_order);
    let counts = sum_samples(opts, count, patterns.len(), |i, acc| {
        let d = sample_poissonized(theta, &mut opts.rng(ID, i))?;
        let bits = maya_bits(&d, lo, hi);
        for (slot, &(r, x)) in acc.iter_mut().zip(&patterns) {
            let start = (x - lo) as usize;
            if bits[start..start + r].iter().all(|&b| b) {
                *slot += 1;
            }
        }
        Ok(())
    })?;
    let reach = lo.unsigned_abs().max(hi.unsigned_abs()) as usize + max_order;
    let kernel = BesselKernel::new(BesselKernelParams::with_theta(theta)?, reach)?;
    let mut stats = Vec::with_capacity(patterns.len());
    for (&(r, x), &ones) in patterns.iter().zip(&counts) {
        let pv = PatternVector::new((0..r as i64).collect(), x)?;
        let det = det_expectation(|a, b| kernel.entry(a, b), &pv, 1e-9)?;
        let s = Summary::bernoulli(ones, count);
        stats.push(StatRecord::new(format!("corr[r={r},x={x}]"), theta, s.mean, Some(s.stderr), count).with_target(det));
    }
    Ok(report(ID, opts, json!({"theta": theta, "window": [lo, hi], "max_order": max_order, "count": count}), stats))
}

/// `|Cov(c_x, c_y)| (|x - y| + 1)` per pair, with the maximum as `C_hat`.
pub fn run_correlation_decay(n: usize, count: usize, pairs: &[(i64, i64)], opts: &RunOptions) -> Result<ExperimentReport> {
    const ID: &str = "correlation_decay";
    require(n >= 1 && !pairs.is_empty() && count >= 2, || "need n >= 1, count >= 2 and at least one pair".into())?;
    let bulk = 1.8 * (n as f64).sqrt();
    require(pairs.iter().all(|&(x, y)| (x.abs() as f64) <= bulk && (y.abs() as f64) <= bulk), || format!("positions must satisfy |x| <= {bulk:.2}"))?;
    let lo = pairs.iter().map(|p| p.0.min(p.1)).min().unwrap_or(0);
    let hi = pairs.iter().map(|p| p.0.max(p.1)).max().unwrap_or(0);
    let w = (hi - lo + 1) as usize;
    // layout: per-position counts, then joint counts per pair
    let acc = sum_samples(opts, count, w + pairs.len(), |i, acc| {
        let d = sample_plancherel(n, &mut opts.rng(ID, i))?;
        let bits = maya_bits(&d, lo, hi);
        for (slot, &b) in acc[..w].iter_mut().zip(&bits) {
            *slot += b as u64;
        }
        for (slot, &(x, y)) in acc[w..].iter_mut().zip(pairs) {
            *slot += (bits[(x - lo) as usize] && bits[(y - lo) as usize]) as u64;
        }
        Ok(())
    })?;
    let nf = count as f64;
    let mut stats = Vec::with_capacity(pairs.len() + 1);
    let mut c_hat: f64 = 0.0;
    for (j, &(x, y)) in pairs.iter().enumerate() {
        let p1 = acc[(x - lo) as usize] as f64 / nf;
        let p2 = acc[(y - lo) as usize] as f64 / nf;
        let p11 = acc[w + j] as f64 / nf;
        let cov = p11 - p1 * p2;
        // variance of (c_x - p1)(c_y - p2) from the 2x2 table
        let cells = [
            (p11, (1.0 - p1) * (1.0 - p2)),
            (p1 - p11, -(1.0 - p1) * p2),
            (p2 - p11, -p1 * (1.0 - p2)),
            (1.0 - p1 - p2 + p11, p1 * p2),
        ];
        let second: f64 = cells.iter().map(|(p, v)| p * v * v).sum();
        let se = ((second - cov * cov).max(0.0) / nf).sqrt();
        let scale = ((x - y).abs() + 1) as f64;
        c_hat = c_hat.max(cov.abs() * scale);
        stats.push(StatRecord::new(format!("scaled_abs_cov[x={x},y={y}]"), n as f64, cov.abs() * scale, Some(se * scale), count));
    }
    stats.push(StatRecord::new("C_hat", n as f64, c_hat, None, count));
    Ok(report(ID, opts, json!({"n": n, "count": count, "pairs": pairs}), stats))
}

/// Covariance at separation `s`, averaged over all bases `x` with
/// `-radius <= x < x + s <= radius` and scaled by `s + 1`.
///
/// Records `scaled_cov[s=..]` (signed) per separation and, for a split point
/// `near`, the maxima of the absolute values over `s <= near` and `s > near`.
pub fn run_decay_by_separation(n: usize, count: usize, radius: i64, separations: &[usize], near: usize, opts: &RunOptions) -> Result<ExperimentReport> {
    const ID: &str = "decay_by_separation";
    let bulk = 1.8 * (n as f64).sqrt();
    require(radius >= 1 && radius as f64 <= bulk, || format!("radius must lie in [1, {bulk:.2}]"))?;
    require(count >= 2, || "count must be at least 2".into())?;
    require(separations.iter().all(|&s| s >= 1 && (s as i64) <= 2 * radius), || "separations must lie in [1, 2 radius]".into())?;
    let w = (2 * radius + 1) as usize;
    let m = separations.len();
    // layout: per-position counts, Σ K_s, Σ K_s²
    let acc = sum_samples(opts, count, w + 2 * m, |i, acc| {
        let d = sample_plancherel(n, &mut opts.rng(ID, i))?;
        let bits = maya_bits(&d, -radius, radius);
        for (slot, &b) in acc[..w].iter_mut().zip(&bits) {
            *slot += b as u64;
        }
        for (j, &s) in separations.iter().enumerate() {
            let k = bits.iter().zip(&bits[s..]).filter(|(a, b)| **a && **b).count() as u64;
            acc[w + j] += k;
            acc[w + m + j] += k * k;
        }
        Ok(())
    })?;
    let nf = count as f64;
    let means: Vec<f64> = acc[..w].iter().map(|&c| c as f64 / nf).collect();
    let mut stats = Vec::with_capacity(m + 2);
    let (mut max_near, mut max_far) = (0.0f64, 0.0f64);
    for (j, &s) in separations.iter().enumerate() {
        let bases = (w - s) as f64;
        let mean_k = acc[w + j] as f64 / nf;
        let var_k = (acc[w + m + j] as f64 / nf - mean_k * mean_k) * nf / (nf - 1.0);
        let prod_means = pairwise_sum(&means.iter().zip(&means[s..]).map(|(a, b)| a * b).collect::<Vec<_>>());
        let cov = (mean_k - prod_means) / bases;
        let scale = (s + 1) as f64;
        let se = var_k.max(0.0).sqrt() / bases / nf.sqrt();
        let v = cov.abs() * scale;
        if s <= near {
            max_near = max_near.max(v);
        } else {
            max_far = max_far.max(v);
        }
        stats.push(StatRecord::new(format!("scaled_cov[s={s}]"), n as f64, cov * scale, Some(se * scale), count));
    }
    stats.push(StatRecord::new(format!("max_scaled_abs_cov[s<={near}]"), n as f64, max_near, None, count));
    stats.push(StatRecord::new(format!("max_scaled_abs_cov[s>{near}]"), n as f64, max_far, None, count));
    Ok(report(ID, opts, json!({"n": n, "count": count, "radius": radius, "separations": separations, "near": near}), stats))
}

/// Frequency of `λ_1 > 2√n + n^δ` or `λ'_1 > 2√n + n^δ` per `δ`.
pub fn run_edge_statistics(n: usize, count: usize, deltas: &[f64], opts: &RunOptions) -> Result<ExperimentReport> {
    const ID: &str = "edge_statistics";
    require(n >= 400 && count >= 2, || "need n >= 400 and count >= 2".into())?;
    require(deltas.iter().all(|&d| d > 1.0 / 6.0 && d <= 0.5), || "deltas must lie in (1/6, 1/2]".into())?;
    let nf = n as f64;
    let edges: Vec<f64> = deltas.iter().map(|&d| 2.0 * nf.sqrt() + nf.powf(d)).collect();
    let acc = sum_samples(opts, count, deltas.len(), |i, acc| {
        let d = sample_plancherel(n, &mut opts.rng(ID, i))?;
        let longest = d.first_row().max(d.num_rows()) as f64;
        for (slot, &e) in acc.iter_mut().zip(&edges) {
            *slot += (longest > e) as u64;
        }
        Ok(())
    })?;
    let stats = deltas
        .iter()
        .zip(&acc)
        .map(|(&delta, &ones)| {
            let s = Summary::bernoulli(ones, count);
            StatRecord::new(format!("exceed[delta={delta}]"), nf, s.mean, Some(s.stderr), count)
        })
        .collect();
    Ok(report(ID, opts, json!({"n": n, "count": count, "deltas": deltas}), stats))
}

/// `sup_t |F_λ(t)|/√n` over half-integers covering the support of `F_λ`.
pub fn sup_deviation(d: &YoungDiagram) -> Result<f64> {
    let f = DeviationFunction::new(d)?;
    let (lo, hi) = f.support();
    let mut sup: f64 = 0.0;
    let mut t = lo.floor() - 0.5;
    while t <= hi + 0.5 {
        sup = sup.max(f.eval(t).abs());
        t += 1.0;
    }
    Ok(sup / f.sqrt_n())
}

pub fn run_limit_shape(n: usize, count: usize, opts: &RunOptions) -> Result<ExperimentReport> {
    const ID: &str = "limit_shape";
    require(n >= 400 && count >= 2, || "need n >= 400 and count >= 2".into())?;
    let values = opts.map_samples(count, |i| sup_deviation(&sample_plancherel(n, &mut opts.rng(ID, i))?))?;
    let s = Summary::of(&values);
    let nf = n as f64;
    let stats = vec![
        StatRecord::new("sup_deviation_mean", nf, s.mean, Some(s.stderr), count),
        StatRecord::new("sup_deviation_max", nf, s.max, None, count),
    ];
    Ok(report(ID, opts, json!({"n": n, "count": count}), stats))
}

/// Per-sample output of [`run_vk_residuals`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VkSample {
    pub index: u64,
    #[serde(flatten)]
    pub decomposition: VKDecomposition,
    /// `(1/√n)` times the seminorm tail beyond `h0`, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seminorm_tail: Option<f64>,
}

/// Variational decomposition of `count` samples, with the residual median,
/// its interquartile range and the means of the two vanishing terms.
pub fn run_vk_residuals(n: usize, count: usize, quad_tol: f64, h0: Option<f64>, opts: &RunOptions) -> Result<(ExperimentReport, Vec<VkSample>)> {
    const ID: &str = "vk_residuals";
    require(n >= 1 && count >= 2, || "need n >= 1 and count >= 2".into())?;
    let samples = opts.map_samples(count, |i| {
        let d = sample_plancherel(n, &mut opts.rng(ID, i))?;
        let decomposition = vk_decompose(&d, quad_tol)?;
        let seminorm_tail = match h0 {
            Some(h0) => Some(seminorm_split(&d, h0, quad_tol)?.tail / (n as f64).sqrt()),
            None => None,
        };
        Ok(VkSample { index: i, decomposition, seminorm_tail })
    })?;
    let nf = n as f64;
    let abs_res: Vec<f64> = samples.iter().map(|s| s.decomposition.residual.abs()).collect();
    let mut res = Data::new(samples.iter().map(|s| s.decomposition.residual).collect::<Vec<_>>());
    let abs_data = Data::new(abs_res);
    let iqr = res.upper_quartile() - res.lower_quartile();
    let mut stats = vec![
        StatRecord::new("median_abs_residual", nf, abs_data.median(), None, count),
        StatRecord::new("residual_iqr", nf, iqr, None, count),
    ];
    let mut mean_of = |name: &str, v: Vec<f64>| {
        let s = Summary::of(&v);
        stats.push(StatRecord::new(name, nf, s.mean, Some(s.stderr), count));
    };
    mean_of("hook_term", samples.iter().map(|s| s.decomposition.hook_term).collect());
    mean_of("seminorm_term", samples.iter().map(|s| s.decomposition.seminorm_term).collect());
    mean_of("abs_arccosh_term", samples.iter().map(|s| s.decomposition.arccosh_term.abs()).collect());
    if h0.is_some() {
        mean_of("seminorm_tail_per_sqrt_n", samples.iter().filter_map(|s| s.seminorm_tail).collect());
    }
    Ok((report(ID, opts, json!({"n": n, "count": count, "quad_tol": quad_tol, "h0": h0}), stats), samples))
}
