//! Samplers for the Plancherel measure and its poissonization, plus the exact
//! distribution for small `n`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::young::{partitions, YoungDiagram};

/// Deterministic generator addressed by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Shape of the Schensted insertion tableau of `word`.
///
/// Only the first row values of each bumping step matter for the shape, but
/// the full rows are kept since a bumped value must be inserted below.
pub fn rsk_shape(word: &[u32]) -> YoungDiagram {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &value in word {
        let mut x = value;
        let mut r = 0;
        loop {
            if r == rows.len() {
                rows.push(vec![x]);
                break;
            }
            let row = &mut rows[r];
            let pos = row.partition_point(|&v| v < x);
            if pos == row.len() {
                row.push(x);
                break;
            }
            x = std::mem::replace(&mut row[pos], x);
            r += 1;
        }
    }
    YoungDiagram::from_rows_unchecked(rows.iter().map(Vec::len).collect())
}

/// Uniform random permutation of `0..n` by Fisher–Yates.
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// A diagram distributed according to `Pl⁽ⁿ⁾`.
pub fn sample_plancherel(n: usize, rng: &mut SeededRng) -> Result<YoungDiagram> {
    if n == 0 {
        return Err(invalid("sample_plancherel needs n >= 1"));
    }
    if n > u32::MAX as usize {
        return Err(invalid("n too large for the permutation sampler"));
    }
    Ok(rsk_shape(&random_permutation(n, rng)))
}

/// Mean at and below which Poisson variates are drawn by inversion.
const POISSON_INVERSION_MAX: f64 = 30.0;

pub fn sample_poisson(mean: f64, rng: &mut SeededRng) -> Result<u64> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(invalid(format!("Poisson mean must be finite and >= 0, got {mean}")));
    }
    if mean == 0.0 {
        return Ok(0);
    }
    if mean <= POISSON_INVERSION_MAX {
        // sequential search on the cumulative distribution
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = (-mean).exp();
        let mut cdf = p;
        while u > cdf {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
            if p < 1e-300 && k as f64 > mean {
                break;
            }
        }
        return Ok(k);
    }
    let dist = Poisson::new(mean).map_err(|e| invalid(e.to_string()))?;
    Ok(dist.sample(rng) as u64)
}

/// A diagram from the poissonized measure with `η = θ²`.
pub fn sample_poissonized(theta: f64, rng: &mut SeededRng) -> Result<YoungDiagram> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(invalid(format!("theta must be positive, got {theta}")));
    }
    let n = sample_poisson(theta * theta, rng)? as usize;
    if n == 0 {
        return Ok(YoungDiagram::empty());
    }
    sample_plancherel(n, rng)
}

/// Largest `n` for which [`exact_distribution`] enumerates.
pub const EXACT_MAX_N: usize = 12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub n: usize,
    pub entries: Vec<(YoungDiagram, f64)>,
}

impl ExactDistribution {
    pub fn probability(&self, d: &YoungDiagram) -> f64 {
        self.entries
            .iter()
            .find(|(e, _)| e == d)
            .map_or(0.0, |(_, p)| *p)
    }
}

/// Exact dimension via the hook length formula in integer arithmetic.
pub fn exact_dim(d: &YoungDiagram) -> u128 {
    let num: u128 = (1..=d.n() as u128).product();
    let den: u128 = d.hooks().map(|h| h as u128).product();
    num / den
}

pub fn exact_distribution(n: usize) -> Result<ExactDistribution> {
    if n == 0 {
        return Err(invalid("exact_distribution needs n >= 1"));
    }
    if n > EXACT_MAX_N {
        return Err(Error::NTooLarge { n, max: EXACT_MAX_N });
    }
    let factorial: u128 = (1..=n as u128).product();
    let entries = partitions(n)
        .into_iter()
        .map(|d| {
            let dim = exact_dim(&d);
            let p = (dim * dim) as f64 / factorial as f64;
            (d, p)
        })
        .collect();
    Ok(ExactDistribution { n, entries })
}
