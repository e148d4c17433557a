use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = [
    "experiment",
    "n_or_theta",
    "statistic",
    "estimate",
    "stderr",
    "count",
    "seed",
    "target",
];

/// One statistic of a report. Deterministic comparison values travel in
/// `target`; `stderr` is absent for order statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRecord {
    pub name: String,
    pub n_or_theta: f64,
    pub estimate: f64,
    pub stderr: Option<f64>,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
}

impl StatRecord {
    pub fn new(name: impl Into<String>, n_or_theta: f64, estimate: f64, stderr: Option<f64>, count: usize) -> Self {
        Self {
            name: name.into(),
            n_or_theta,
            estimate,
            stderr,
            count,
            target: None,
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = Some(target);
        self
    }

    /// `(estimate - target)/stderr`, when both exist.
    pub fn z_score(&self) -> Option<f64> {
        let (t, se) = (self.target?, self.stderr?);
        let diff = self.estimate - t;
        Some(if se > 0.0 {
            diff / se
        } else if diff.abs() < 1e-12 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub package_version: String,
    pub os: String,
    pub arch: String,
    pub workers: Option<usize>,
    /// Free-form provenance of defaults (for example where the seed came from).
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Environment {
    pub fn current(workers: Option<usize>) -> Self {
        Self {
            package_version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            workers,
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub parameters: Value,
    pub statistics: Vec<StatRecord>,
    pub environment: Environment,
}

impl ExperimentReport {
    pub fn get(&self, name: &str) -> Option<&StatRecord> {
        self.statistics.iter().find(|s| s.name == name)
    }

    pub fn write_csv(&self, out: impl Write, header: bool) -> Result<()> {
        write_csv(std::slice::from_ref(self), out, header)
    }
}

/// Writes the statistics of several reports as one CSV table.
pub fn write_csv(reports: &[ExperimentReport], out: impl Write, header: bool) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let err = |e: csv::Error| Error::Record(e.to_string());
    if header {
        w.write_record(CSV_HEADER).map_err(err)?;
    }
    for r in reports {
        for s in &r.statistics {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                r.experiment.clone(),
                s.n_or_theta.to_string(),
                s.name.clone(),
                s.estimate.to_string(),
                opt(s.stderr),
                s.count.to_string(),
                r.seed.to_string(),
                opt(s.target),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::Record(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let report = ExperimentReport {
            experiment: "hooks".into(),
            seed: 9,
            parameters: serde_json::json!({"n": 400}),
            statistics: vec![
                StatRecord::new("k=1", 400.0, 1.07, Some(0.01), 10).with_target(1.08),
                StatRecord::new("max", 400.0, 2.0, None, 10),
            ],
            environment: Environment::current(None),
        };
        let mut buf = Vec::new();
        report.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "experiment,n_or_theta,statistic,estimate,stderr,count,seed,target");
        assert_eq!(lines[1], "hooks,400,k=1,1.07,0.01,10,9,1.08");
        assert_eq!(lines[2], "hooks,400,max,2,,10,9,");
        let z = report.statistics[0].z_score().unwrap();
        assert!((z + 1.0).abs() < 1e-9);
        let back: ExperimentReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(back, report);
    }
}
