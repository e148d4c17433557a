//! Reproducible Monte-Carlo statistics.
//!
//! Every sample draws from its own stream, `SeededRng::new(seed,
//! stream_id(experiment, index))`, so a report depends only on the experiment
//! id, the seed and the parameters. Samples run on a rayon pool capped by
//! [`RunOptions::workers`]; reductions are either exact integer sums or
//! pairwise sums over index-ordered vectors, so reports are bit-identical for
//! every worker count.

mod report;
mod suites;

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};
use crate::numeric::pairwise_sum;
use crate::sampler::{ExactDistribution, SeededRng};
use crate::young::YoungDiagram;

pub use report::{write_csv, Environment, ExperimentReport, StatRecord, CSV_HEADER};
pub use suites::{
    hook_frequency_limit, pattern_target, run_boo_correlations, run_correlation_decay,
    run_decay_by_separation, run_edge_statistics, run_entropy_convergence, run_hook_frequencies,
    run_limit_shape, run_pattern_frequency, run_vk_residuals, sup_deviation, PatternFrequencySpec,
    VkSample,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    /// Upper bound on worker threads; `None` uses the rayon default.
    pub workers: Option<usize>,
}

impl RunOptions {
    pub fn new(seed: u64) -> Self {
        Self { seed, workers: None }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub(crate) fn rng(&self, experiment: &str, index: u64) -> SeededRng {
        SeededRng::new(self.seed, stream_id(experiment, index))
    }

    /// Runs `f` for `0..count` on the pool, returning results in index order.
    pub(crate) fn map_samples<T: Send>(
        &self,
        count: usize,
        f: impl Fn(u64) -> Result<T> + Sync + Send,
    ) -> Result<Vec<T>> {
        self.install(|| (0..count as u64).into_par_iter().map(&f).collect())
    }

    pub(crate) fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> T {
        match self.workers {
            Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build() {
                Ok(pool) => pool.install(job),
                Err(_) => job(),
            },
            None => job(),
        }
    }
}

/// Stable stream id for sample `index` of `experiment`: FNV-1a of the id,
/// mixed with the index through SplitMix64.
pub fn stream_id(experiment: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in experiment.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix(h ^ splitmix(index))
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mean, sample standard deviation and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        let nf = count as f64;
        let mean = pairwise_sum(values) / nf;
        let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let std = if count > 1 { (pairwise_sum(&dev) / (nf - 1.0)).sqrt() } else { 0.0 };
        Self {
            mean,
            std,
            stderr: std / nf.sqrt(),
            count,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Summary of a 0/1 sample given the number of ones.
    pub fn bernoulli(ones: u64, count: usize) -> Self {
        let nf = count as f64;
        let p = ones as f64 / nf;
        let var = if count > 1 { p * (1.0 - p) * nf / (nf - 1.0) } else { 0.0 };
        Self {
            mean: p,
            std: var.sqrt(),
            stderr: (var / nf).sqrt(),
            count,
            min: if ones < count as u64 { 0.0 } else { 1.0 },
            max: if ones > 0 { 1.0 } else { 0.0 },
        }
    }
}

/// Pearson chi-square of observed shape counts against an exact distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

pub fn chi_square_fit(samples: &[YoungDiagram], exact: &ExactDistribution) -> Result<ChiSquare> {
    if samples.is_empty() || exact.entries.len() < 2 {
        return Err(invalid("chi-square needs samples and at least two cells"));
    }
    let total = samples.len() as f64;
    let mut observed = vec![0u64; exact.entries.len()];
    for s in samples {
        match exact.entries.iter().position(|(d, _)| d == s) {
            Some(i) => observed[i] += 1,
            None => return Err(invalid(format!("sample {s} is not a diagram of size {}", exact.n))),
        }
    }
    let statistic: f64 = exact
        .entries
        .iter()
        .zip(&observed)
        .map(|((_, p), &o)| {
            let e = p * total;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dof = exact.entries.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| invalid(e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: 1.0 - dist.cdf(statistic),
    })
}

/// Maya bits `c_k` for `k` in `lo..=hi` (ones at `λ_i - i`, all ones far left).
pub(crate) fn maya_bits(d: &YoungDiagram, lo: i64, hi: i64) -> Vec<bool> {
    let rows = d.num_rows() as i64;
    let mut bits: Vec<bool> = (lo..=hi).map(|k| k < -rows).collect();
    for pos in d.maya_positions() {
        if pos >= lo && pos <= hi {
            bits[(pos - lo) as usize] = true;
        }
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{exact_distribution, sample_plancherel};

    #[test]
    fn stream_ids_are_stable_and_distinct() {
        assert_eq!(stream_id("hooks", 3), stream_id("hooks", 3));
        assert_ne!(stream_id("hooks", 3), stream_id("hooks", 4));
        assert_ne!(stream_id("hooks", 3), stream_id("edge", 3));
        // frozen so that reports stay reproducible across releases
        assert_eq!(stream_id("", 0), splitmix(0xcbf2_9ce4_8422_2325 ^ splitmix(0)));
    }

    #[test]
    fn summary_matches_hand_computation() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.stderr - s.std / 2.0).abs() < 1e-15);
        let b = Summary::bernoulli(3, 4);
        let direct = Summary::of(&[1.0, 1.0, 1.0, 0.0]);
        assert!((b.std - direct.std).abs() < 1e-15 && b.mean == direct.mean);
    }

    #[test]
    fn maya_bits_follow_rows() {
        let d = YoungDiagram::from_rows(vec![3, 1]).unwrap();
        // λ_1 - 1 = 2, λ_2 - 2 = -1, then -3, -4, ...
        let bits = maya_bits(&d, -4, 3);
        assert_eq!(bits, vec![true, true, false, true, false, false, true, false]);
        assert_eq!(bits, (-4..=3).map(|k| d.profile().bit(k) == 1).collect::<Vec<_>>());
    }

    #[test]
    fn map_samples_is_independent_of_workers() {
        let run = |w| {
            RunOptions::new(5)
                .with_workers(w)
                .map_samples(16, |i| Ok(sample_plancherel(30, &mut RunOptions::new(5).rng("t", i))?))
                .unwrap()
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn chi_square_detects_wrong_distribution() {
        let exact = exact_distribution(3).unwrap();
        let good: Vec<YoungDiagram> = exact
            .entries
            .iter()
            .flat_map(|(d, p)| std::iter::repeat(d.clone()).take((p * 600.0).round() as usize))
            .collect();
        let fit = chi_square_fit(&good, &exact).unwrap();
        assert!(fit.statistic < 1e-9 && fit.p_value > 0.99 && fit.dof == 2);
        let bad = vec![YoungDiagram::from_rows(vec![3]).unwrap(); 100];
        assert!(chi_square_fit(&bad, &exact).unwrap().p_value < 1e-6);
        assert!(chi_square_fit(&[YoungDiagram::from_rows(vec![4]).unwrap()], &exact).is_err());
    }
}
