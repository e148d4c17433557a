use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::process::ExitCode;

use plancherel::experiments::{self, ExperimentReport, PatternFrequencySpec, RunOptions, VkSample};
use plancherel::kernels::{sine_kernel, BesselKernel};
use plancherel::records::{self, SampleHeader};
use plancherel::variational::seminorm_split;
use plancherel::{
    entropy_constant, sample_plancherel, sample_poissonized, vk_decompose, BesselKernelParams, EntropyConfig, Error,
    SeededRng, SineKernelParams,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{Cli, Command, Format, KernelCommand, VerifyCommand};

pub const SEED_VAR: &str = "PLANCHEREL_SEED";
const DEFAULT_SEED: u64 = 1;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parameter(String),
    Computation(String),
}

impl Failure {
    pub fn report(self) -> ExitCode {
        let (kind, code, message) = match self {
            Failure::Usage(m) => ("usage", 2, m),
            Failure::Parameter(m) => ("parameter", 3, m),
            Failure::Computation(m) => ("computation", 4, m),
        };
        eprintln!("{}", json!({"error": kind, "message": message.trim_end()}));
        ExitCode::from(code)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ToleranceUnreachable { .. } | Error::NotAProbability { .. } | Error::BudgetNotMet { .. } => {
                Failure::Computation(e.to_string())
            }
            _ => Failure::Parameter(e.to_string()),
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Computation(format!("i/o error: {e}"))
}

fn check(cond: bool, msg: &str) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::Parameter(msg.to_string()))
    }
}

struct Context {
    seed: u64,
    seed_note: String,
    workers: Option<usize>,
    format: Format,
    out: Box<dyn Write>,
}

impl Context {
    fn options(&self) -> RunOptions {
        RunOptions { seed: self.seed, workers: self.workers }
    }

    fn line(&mut self, value: &impl Serialize) -> Result<(), Failure> {
        let text = serde_json::to_string(value).map_err(|e| Failure::Computation(e.to_string()))?;
        writeln!(self.out, "{text}").map_err(io_failure)
    }

    fn emit_report(&mut self, mut report: ExperimentReport) -> Result<(), Failure> {
        report.environment.notes.push(self.seed_note.clone());
        match self.format {
            Format::Records => self.line(&report),
            Format::Csv => Ok(report.write_csv(&mut self.out, true)?),
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<(u64, String), Failure> {
    if let Some(s) = flag {
        return Ok((s, format!("seed {s} from --seed")));
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => {
            let s = v
                .trim()
                .parse()
                .map_err(|_| Failure::Parameter(format!("{SEED_VAR}={v:?} is not an unsigned integer")))?;
            Ok((s, format!("seed {s} from {SEED_VAR}")))
        }
        Err(_) => Ok((DEFAULT_SEED, format!("seed {DEFAULT_SEED} (default)"))),
    }
}

pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    let (seed, seed_note) = resolve_seed(cli.seed)?;
    if let Some(w) = cli.workers {
        check(w >= 1, "--workers must be at least 1")?;
    }
    let out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(io_failure)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut ctx = Context { seed, seed_note, workers: cli.workers, format: cli.format, out };
    match cli.command {
        Command::Sample(a) => sample(&mut ctx, a.n, a.theta, a.count)?,
        Command::Entropy(a) => {
            check(a.tol > 0.0, "--tol must be positive")?;
            let config = EntropyConfig {
                h_max: a.h_max,
                a_nodes: a.a_nodes,
                s_nodes: a.s_nodes,
                h_nodes: a.h_nodes,
                k_max: a.k_max,
                tol: a.tol,
            };
            let estimate = entropy_constant(config)?;
            ctx.line(&estimate)?;
        }
        Command::Kernel(k) => kernel(&mut ctx, k)?,
        Command::Verify(v) => verify(&mut ctx, v)?,
        Command::ReportMerge(m) => {
            let mut reports = Vec::new();
            for path in &m.inputs {
                let file = File::open(path).map_err(|e| Failure::Parameter(format!("{}: {e}", path.display())))?;
                for (i, line) in BufReader::new(file).lines().enumerate() {
                    let line = line.map_err(io_failure)?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let r: ExperimentReport = serde_json::from_str(&line)
                        .map_err(|e| Failure::Parameter(format!("{}:{}: not a report record: {e}", path.display(), i + 1)))?;
                    reports.push(r);
                }
            }
            match ctx.format {
                Format::Records => {
                    for r in &reports {
                        ctx.line(r)?;
                    }
                }
                Format::Csv => experiments::write_csv(&reports, &mut ctx.out, true)?,
            }
        }
    }
    ctx.out.flush().map_err(io_failure)
}

fn sample(ctx: &mut Context, n: Option<usize>, theta: Option<f64>, count: usize) -> Result<(), Failure> {
    let parameters = match (n, theta) {
        (Some(n), _) => {
            check(n >= 1, "--n must be at least 1")?;
            json!({"n": n, "count": count, "seed_source": ctx.seed_note})
        }
        (None, Some(t)) => {
            check(t > 0.0 && t.is_finite(), "--theta must be positive")?;
            json!({"theta": t, "count": count, "seed_source": ctx.seed_note})
        }
        (None, None) => return Err(Failure::Usage("one of --n or --theta is required".into())),
    };
    records::write_header(&mut ctx.out, &SampleHeader::new(ctx.seed, parameters))?;
    for i in 0..count as u64 {
        let mut rng = SeededRng::new(ctx.seed, i);
        let d = match n {
            Some(n) => sample_plancherel(n, &mut rng)?,
            None => sample_poissonized(theta.unwrap_or_default(), &mut rng)?,
        };
        records::write_diagram(&mut ctx.out, &d)?;
    }
    Ok(())
}

fn kernel(ctx: &mut Context, k: KernelCommand) -> Result<(), Failure> {
    match k {
        KernelCommand::Bessel { theta, x, y, tol } => {
            let params = BesselKernelParams::new(theta, tol)?;
            let kernel = BesselKernel::new(params, x.unsigned_abs().max(y.unsigned_abs()) as usize + 2)?;
            let (value, bound) = if x == y {
                let e = kernel.diag_eval(x);
                (e.value, e.bound)
            } else {
                // each product of two table entries is off by at most twice the table bound
                let b = 2.0 * theta * 2.0 * kernel.table().bound() / (x - y).unsigned_abs() as f64;
                (kernel.off_diag(x, y)?, b)
            };
            ctx.line(&json!({"kernel": "bessel", "theta": theta, "x": x, "y": y, "value": value, "bound": bound}))
        }
        KernelCommand::Sine { a, k } => {
            let p = SineKernelParams::new(a)?;
            let value = sine_kernel(p, k);
            ctx.line(&json!({"kernel": "sine", "a": a, "k": k, "value": value, "bound": f64::EPSILON * value.abs()}))
        }
    }
}

fn read_input(path: &str) -> Result<Vec<plancherel::YoungDiagram>, Failure> {
    let (_, diagrams) = if path == "-" {
        records::read_dump(io::stdin().lock())?
    } else {
        let file = File::open(path).map_err(|e| Failure::Parameter(format!("{path}: {e}")))?;
        records::read_dump(BufReader::new(file))?
    };
    Ok(diagrams)
}

fn verify(ctx: &mut Context, v: VerifyCommand) -> Result<(), Failure> {
    let opts = ctx.options();
    let report = match v {
        VerifyCommand::Vk { n, count, quad_tol, h0, input } => {
            check(quad_tol > 0.0, "--quad-tol must be positive")?;
            if let Some(h) = h0 {
                check(h > 0.0, "--h0 must be positive")?;
            }
            if let Some(path) = input {
                check(ctx.format == Format::Records, "--input produces per-diagram records only")?;
                for (index, d) in read_input(&path)?.iter().enumerate() {
                    let decomposition = vk_decompose(d, quad_tol)?;
                    let seminorm_tail = match h0 {
                        Some(h) => Some(seminorm_split(d, h, quad_tol)?.tail / (d.n() as f64).sqrt()),
                        None => None,
                    };
                    ctx.line(&VkSample { index: index as u64, decomposition, seminorm_tail })?;
                }
                return Ok(());
            }
            let (report, samples) = experiments::run_vk_residuals(n, count, quad_tol, h0, &opts)?;
            if ctx.format == Format::Records {
                for s in &samples {
                    ctx.line(s)?;
                }
                return Ok(());
            }
            report
        }
        VerifyCommand::Hooks { n, count, k } => experiments::run_hook_frequencies(&k, n, count, &opts)?,
        VerifyCommand::Patterns { n, count, offsets, nodes, values } => {
            let spec = PatternFrequencySpec::new(offsets, nodes, values)?;
            experiments::run_pattern_frequency(&spec, n, count, &opts)?
        }
        VerifyCommand::Boo { theta, lo, hi, max_order, count } => {
            experiments::run_boo_correlations(theta, (lo, hi), max_order, count, &opts)?
        }
        VerifyCommand::Decay { n, count, radius, max_separation, near } => {
            let seps: Vec<usize> = (1..=max_separation).collect();
            experiments::run_decay_by_separation(n, count, radius, &seps, near, &opts)?
        }
        VerifyCommand::Edge { n, count, deltas } => experiments::run_edge_statistics(n, count, &deltas, &opts)?,
        VerifyCommand::Shape { n, count } => experiments::run_limit_shape(n, count, &opts)?,
        VerifyCommand::Convergence { ns, count } => experiments::run_entropy_convergence(&ns, count, &opts)?,
    };
    ctx.emit_report(report)
}
