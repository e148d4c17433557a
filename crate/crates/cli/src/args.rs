use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Plancherel measure toolkit: sampling, kernels, the entropy constant and
/// Monte-Carlo verification suites.
///
/// Data records go to stdout (or --output); diagnostics and error records go
/// to stderr. Exit codes: 0 success, 2 usage error, 3 invalid parameter,
/// 4 computation failure.
#[derive(Debug, Parser)]
#[command(name = "plancherel", version, about, long_about)]
pub struct Cli {
    /// Seed for all random streams. Falls back to $PLANCHEREL_SEED, then to 1.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Maximum number of worker threads used by the experiments.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Write data records to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Records)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    Records,
    /// CSV table (experiment, n_or_theta, statistic, estimate, stderr, count, seed, target).
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw diagrams and print them as line records after a header record.
    Sample(SampleArgs),
    /// Compute the entropy constant with an itemized error budget.
    Entropy(EntropyArgs),
    /// Evaluate the discrete Bessel or sine kernel.
    #[command(subcommand)]
    Kernel(KernelCommand),
    /// Monte-Carlo and per-diagram verification suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Merge report records from several files into one table.
    ReportMerge(MergeArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Number of cells (fixed-n Plancherel measure).
    #[arg(long, conflicts_with = "theta", required_unless_present = "theta")]
    pub n: Option<usize>,
    /// Poissonization parameter θ (cell count ~ Poisson(θ²)).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Number of diagrams.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Cutoff of the h integration (tail beyond it is extrapolated).
    #[arg(long, default_value_t = 200.0)]
    pub h_max: f64,
    /// Gauss-Legendre nodes for the bulk position a.
    #[arg(long, default_value_t = 96)]
    pub a_nodes: usize,
    /// Gauss-Legendre nodes for s.
    #[arg(long, default_value_t = 32)]
    pub s_nodes: usize,
    /// Total h nodes distributed over unit cells.
    #[arg(long, default_value_t = 400)]
    pub h_nodes: usize,
    /// Terms summed explicitly in the hook series.
    #[arg(long, default_value_t = 200)]
    pub k_max: u64,
    /// Required total error budget.
    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum KernelCommand {
    /// Discrete Bessel kernel 𝒥(θ²; x, y).
    Bessel {
        #[arg(long)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: i64,
        #[arg(long, allow_hyphen_values = true)]
        y: i64,
        /// Relative evaluation tolerance, at most 1e-6.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Discrete sine kernel 𝒮(k, a).
    Sine {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Variational decomposition of sampled diagrams or of an input dump.
    Vk {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 1e-4)]
        quad_tol: f64,
        /// Also compute (1/√n) times the seminorm tail beyond this h0.
        #[arg(long)]
        h0: Option<f64>,
        /// Read diagram records from a file, or `-` for stdin, instead of sampling.
        #[arg(long)]
        input: Option<String>,
    },
    /// Mean of h_k(λ)/√n against its limit.
    Hooks {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<usize>,
    },
    /// Weighted pattern averages against the sine-kernel integral.
    Patterns {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1")]
        offsets: Vec<i64>,
        /// Weight nodes in [-2, 2].
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-2,2")]
        nodes: Vec<f64>,
        /// Weight values at the nodes.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,1")]
        values: Vec<f64>,
    },
    /// Poissonized correlations against Bessel-kernel determinants.
    Boo {
        #[arg(long, default_value_t = 30.0)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -20)]
        lo: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 20)]
        hi: i64,
        #[arg(long, default_value_t = 2)]
        max_order: usize,
        #[arg(long, default_value_t = 20_000)]
        count: usize,
    },
    /// Bulk-averaged covariance per separation, scaled by separation + 1.
    Decay {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 40_000)]
        count: usize,
        /// Positions |x| <= radius are used; at most 1.8√n.
        #[arg(long, default_value_t = 180)]
        radius: i64,
        #[arg(long, default_value_t = 200)]
        max_separation: usize,
        /// Split point between near and far separations.
        #[arg(long, default_value_t = 50)]
        near: usize,
    },
    /// Frequency of rows or columns longer than 2√n + n^δ.
    Edge {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.3,0.5")]
        deltas: Vec<f64>,
    },
    /// Sup-deviation of the boundary from the limit shape.
    Shape {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// -log Pl(λ)/√n across sizes.
    Convergence {
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    /// Files holding report records (one JSON report per line).
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
}
