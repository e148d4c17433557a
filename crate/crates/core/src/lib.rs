//! Plancherel measure on Young diagrams and the entropy of the measure.
//!
//! The crate is organized bottom-up:
//!
//! * [`young`]: diagrams, hooks, exact log-probabilities, profiles, the limit shape;
//! * [`sampler`]: exact samplers (RSK and poissonized) and small-`n` enumeration;
//! * [`kernels`]: Bessel functions, the discrete Bessel and sine kernels;
//! * [`entropy`]: the entropy constant as a determinantal quadrature plus a series;
//! * [`variational`]: the terms of the variational formula for `-log Pl(λ)/√n`;
//! * [`experiments`]: reproducible Monte-Carlo statistics.

pub mod entropy;
pub mod error;
pub mod experiments;
pub mod kernels;
pub mod numeric;
pub mod records;
pub mod sampler;
pub mod variational;
pub mod young;

pub use entropy::{entropy_constant, EntropyConfig, EntropyEstimate};
pub use error::{Error, Result};
pub use kernels::{BesselKernelParams, PatternVector, SineKernelParams};
pub use sampler::{exact_distribution, sample_plancherel, sample_poissonized, ExactDistribution, SeededRng};
pub use variational::{vk_decompose, VKDecomposition};
pub use young::{DeviationFunction, ProfileWindow, YoungDiagram};
