//! Initial-guess sweeps, iteration statistics and their CSV/JSON output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::solvers::{self, Method, SolverConfig, Status};
use crate::target::{self, TargetFunction};
use crate::{Error, Result};

pub const SCHEMA: &str = "gendrv-sweep-v1";

/// Limits closer than this are reported as one cluster.
pub const CLUSTER_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Expression in `x` or `builtin:<name>`.
    pub function: String,
    pub methods: Vec<Method>,
    pub x0_start: f64,
    pub x0_end: f64,
    pub x0_count: usize,
    pub config: SolverConfig,
}

impl SweepSpec {
    /// Root-finding reproduction grid: 31 points on `[-2, 13]`.
    pub fn default_roots(methods: Vec<Method>) -> Self {
        Self {
            function: "builtin:quartic-y".into(),
            methods,
            x0_start: -2.0,
            x0_end: 13.0,
            x0_count: 31,
            config: SolverConfig::default(),
        }
    }

    /// Extremum-finding reproduction grid: 33 points on `[1.5, 9.5]`.
    pub fn default_extrema(methods: Vec<Method>) -> Self {
        Self { x0_start: 1.5, x0_end: 9.5, x0_count: 33, ..Self::default_roots(methods) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.x0_count < 1 {
            return Err(Error::InvalidConfig("x0_count must be at least 1".into()));
        }
        if !(self.x0_start.is_finite() && self.x0_end.is_finite()) || self.x0_start > self.x0_end {
            return Err(Error::InvalidConfig(format!("bad x0 range [{}, {}]", self.x0_start, self.x0_end)));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("no methods requested".into()));
        }
        self.config.validate()
    }

    /// Uniformly spaced initial guesses, endpoints included.
    pub fn initial_guesses(&self) -> Vec<f64> {
        if self.x0_count == 1 {
            return vec![self.x0_start];
        }
        let span = self.x0_end - self.x0_start;
        let last = (self.x0_count - 1) as f64;
        (0..self.x0_count)
            .map(|i| if i == self.x0_count - 1 { self.x0_end } else { self.x0_start + span * i as f64 / last })
            .collect()
    }

    /// Requested methods, deduplicated, in canonical order.
    fn ordered_methods(&self) -> Vec<Method> {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub method: Method,
    pub x0: f64,
    pub status: Status,
    #[serde(with = "nullable_f64")]
    pub x_star: f64,
    #[serde(with = "nullable_f64")]
    pub y_star: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCluster {
    pub center: f64,
    pub count: usize,
}

/// Per-method statistics over converged records only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub method: Method,
    pub n_records: usize,
    pub n_converged: usize,
    pub mean_iter: Option<f64>,
    pub std_iter_population: Option<f64>,
    /// `None` below two converged records.
    pub std_iter_sample: Option<f64>,
    pub max_iter_observed: Option<usize>,
    pub distinct_limits: Vec<LimitCluster>,
}

fn record_for(method: Method, f: &dyn TargetFunction, x0: f64, cfg: &SolverConfig) -> SweepRecord {
    match solvers::run_method(method, f, x0, cfg) {
        Ok(r) => {
            SweepRecord { method, x0, status: r.status, x_star: r.x_star, y_star: r.y_star, iterations: r.iterations }
        }
        // precondition failures (missing tower) are per-run outcomes here
        Err(_) => SweepRecord { method, x0, status: Status::DomainError, x_star: x0, y_star: f64::NAN, iterations: 0 },
    }
}

fn jobs(spec: &SweepSpec) -> Vec<(Method, f64)> {
    let xs = spec.initial_guesses();
    spec.ordered_methods().into_iter().flat_map(|m| xs.iter().map(move |&x| (m, x))).collect()
}

/// Runs every method from every initial guess, in parallel.
/// Records are ordered by method, then `x0`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let f = target::resolve(&spec.function)?;
    let f: &dyn TargetFunction = f.as_ref();
    Ok(jobs(spec).into_par_iter().map(|(m, x0)| record_for(m, f, x0, &spec.config)).collect())
}

/// Single-threaded [`run_sweep`].
pub fn run_sweep_sequential(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let f = target::resolve(&spec.function)?;
    let f: &dyn TargetFunction = f.as_ref();
    Ok(jobs(spec).into_iter().map(|(m, x0)| record_for(m, f, x0, &spec.config)).collect())
}

/// Sorted greedy clustering: a value joins the current cluster while it is
/// within `tol` of that cluster's first member.
pub fn cluster_limits(values: &[f64], tol: f64) -> Vec<LimitCluster> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let first = sorted[i];
        let j = sorted[i..].iter().position(|&v| v - first > tol).map_or(sorted.len(), |k| i + k);
        let members = &sorted[i..j];
        out.push(LimitCluster { center: members.iter().sum::<f64>() / members.len() as f64, count: members.len() });
        i = j;
    }
    out
}

/// One [`SummaryStats`] per method, in order of first appearance.
pub fn summarize(records: &[SweepRecord]) -> Vec<SummaryStats> {
    let mut methods: Vec<Method> = Vec::new();
    for r in records {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    methods
        .into_iter()
        .map(|method| {
            let mine: Vec<&SweepRecord> = records.iter().filter(|r| r.method == method).collect();
            let conv: Vec<&SweepRecord> = mine.iter().copied().filter(|r| r.status == Status::Converged).collect();
            let n = conv.len();
            let iters: Vec<f64> = conv.iter().map(|r| r.iterations as f64).collect();
            let mean = (n > 0).then(|| iters.iter().sum::<f64>() / n as f64);
            let ss = mean.map(|m| iters.iter().map(|v| (v - m).powi(2)).sum::<f64>());
            SummaryStats {
                method,
                n_records: mine.len(),
                n_converged: n,
                mean_iter: mean,
                std_iter_population: ss.map(|s| (s / n as f64).sqrt()),
                std_iter_sample: ss.filter(|_| n > 1).map(|s| (s / (n - 1) as f64).sqrt()),
                max_iter_observed: conv.iter().map(|r| r.iterations).max(),
                distinct_limits: cluster_limits(&conv.iter().map(|r| r.x_star).collect::<Vec<_>>(), CLUSTER_TOL),
            }
        })
        .collect()
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn format_sig12(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa.to_string()), exp.abs())
    }
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["method", "x0", "status", "x_star", "y_star", "iterations"])?;
    for r in records {
        w.write_record([
            r.method.name().to_string(),
            format_sig12(r.x0),
            r.status.to_string(),
            format_sig12(r.x_star),
            format_sig12(r.y_star),
            r.iterations.to_string(),
        ])?;
    }
    w.flush()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_csv(records, BufWriter::new(file)).map_err(io_err(path))
}

/// Everything a sweep produced, as written by [`emit_json`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: String,
    pub spec_echo: SweepSpec,
    pub records: Vec<SweepRecord>,
    pub stats: Vec<SummaryStats>,
}

pub fn emit_json(records: &[SweepRecord], stats: &[SummaryStats], spec: &SweepSpec, path: &Path) -> Result<()> {
    let report = SweepReport {
        schema: SCHEMA.to_string(),
        spec_echo: spec.clone(),
        records: records.to_vec(),
        stats: stats.to_vec(),
    };
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &report).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(io_err(path))
}

pub fn read_json(path: &Path) -> Result<SweepReport> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|source| Error::Json { path: path.to_path_buf(), source })
}

/// JSON has no NaN; non-finite values travel as `null`.
mod nullable_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}
