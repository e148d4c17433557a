//! Shared fixtures for the benchmarks.

use plancherel::{sample_plancherel, SeededRng, YoungDiagram};

/// A fixed Plancherel sample of size `n`.
pub fn fixture(n: usize) -> YoungDiagram {
    sample_plancherel(n, &mut SeededRng::new(0, n as u64)).expect("n >= 1")
}
