//! Root finding (L-NR, C-NR, Q-NR) and extremum finding (L-G, Q-G) driven by
//! derivator fits.
//!
//! Every method runs the same loop: step 0 is the initial guess, each update
//! produces `x_{n+1}` from a derivator fitted at `x_n`, and the run converges
//! as soon as `|x_{n+1} − x_n| ≤ tol`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cubic::{self, Cubic};
use crate::derivator::{self, Backend, DerivatorCoefficients};
use crate::target::TargetFunction;
use crate::{Error, Result};

/// L-G stops once an iterate leaves `[-1e12, 1e12]`.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "l-nr")]
    LNR,
    #[serde(rename = "c-nr")]
    CNR,
    #[serde(rename = "q-nr")]
    QNR,
    #[serde(rename = "l-g")]
    LG,
    #[serde(rename = "q-g")]
    QG,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::LNR, Method::CNR, Method::QNR, Method::LG, Method::QG];

    pub fn name(self) -> &'static str {
        match self {
            Method::LNR => "l-nr",
            Method::CNR => "c-nr",
            Method::QNR => "q-nr",
            Method::LG => "l-g",
            Method::QG => "q-g",
        }
    }

    pub fn is_root_finder(self) -> bool {
        matches!(self, Method::LNR | Method::CNR | Method::QNR)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        Method::ALL
            .into_iter()
            .find(|m| m.name().replace('-', "") == key)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Direction {
    #[default]
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Convergence threshold on `|x_n − x_{n−1}|`.
    pub tol: f64,
    pub max_iter: usize,
    /// L-G step size.
    pub step_a: f64,
    pub backend: Backend,
    /// L-G only.
    pub direction: Direction,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-4, max_iter: 200, step_a: 0.05, backend: Backend::Analytic, direction: Direction::Minimize }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if !(self.step_a > 0.0 && self.step_a.is_finite()) {
            return Err(Error::InvalidConfig(format!("step_a must be positive, got {}", self.step_a)));
        }
        if let Backend::FiniteDifference(Some(d)) = self.backend {
            if d == 0.0 || !d.is_finite() {
                return Err(Error::InvalidDelta(d));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Converged,
    MaxIterExceeded,
    NoRealRoot,
    ZeroDerivative,
    DegenerateCurvature,
    DomainError,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Converged" => Status::Converged,
            "MaxIterExceeded" => Status::MaxIterExceeded,
            "NoRealRoot" => Status::NoRealRoot,
            "ZeroDerivative" => Status::ZeroDerivative,
            "DegenerateCurvature" => Status::DegenerateCurvature,
            "DomainError" => Status::DomainError,
            _ => return Err(Error::InvalidConfig(format!("unknown status `{s}`"))),
        })
    }
}

/// Lower-order step taken when the method's own derivator degenerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fallback {
    Quadratic,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<Fallback>,
    /// Q-G: ordinate of the parabola vertex that produced `x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_y: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub method: Method,
    pub steps: Vec<TraceStep>,
    /// Set when L-G left the divergence window.
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub status: Status,
    pub x_star: f64,
    pub y_star: f64,
    /// Update steps performed.
    pub iterations: usize,
    pub trace: IterationTrace,
}

struct Update {
    x: f64,
    fallback: Option<Fallback>,
    vertex_y: Option<f64>,
}

impl Update {
    fn to(x: f64) -> Self {
        Self { x, fallback: None, vertex_y: None }
    }
}

fn status_of(e: Error) -> Status {
    match e {
        Error::DegenerateCubic => Status::DegenerateCurvature,
        _ => Status::DomainError,
    }
}

fn fit_local<F>(f: &F, x: f64, degree: usize, cfg: &SolverConfig) -> std::result::Result<DerivatorCoefficients, Status>
where
    F: TargetFunction + ?Sized,
{
    derivator::fit(f, x, degree, cfg.backend).map_err(status_of)
}

fn check_preconditions<F: TargetFunction + ?Sized>(f: &F, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.backend == Backend::Analytic && !f.has_tower() {
        return Err(Error::MissingTower);
    }
    Ok(())
}

fn iterate<F, S>(f: &F, x0: f64, cfg: &SolverConfig, method: Method, mut step: S) -> SolverResult
where
    F: TargetFunction + ?Sized,
    S: FnMut(f64, f64) -> std::result::Result<Update, Status>,
{
    let mut trace = IterationTrace { method, steps: Vec::new(), diverged: false };
    let finish = |status, x, y, iterations, trace| SolverResult { status, x_star: x, y_star: y, iterations, trace };

    let y0 = match f.eval(x0) {
        Ok(y) => y,
        Err(_) => return finish(Status::DomainError, x0, f64::NAN, 0, trace),
    };
    trace.steps.push(TraceStep { n: 0, x: x0, y: y0, fallback: None, vertex_y: None });
    let (mut x, mut y) = (x0, y0);

    for n in 1..=cfg.max_iter {
        let upd = match step(x, y) {
            Ok(u) => u,
            Err(status) => return finish(status, x, y, n - 1, trace),
        };
        if !upd.x.is_finite() {
            return finish(Status::DomainError, x, y, n - 1, trace);
        }
        let Ok(y_next) = f.eval(upd.x) else {
            return finish(Status::DomainError, x, y, n - 1, trace);
        };
        trace.steps.push(TraceStep { n, x: upd.x, y: y_next, fallback: upd.fallback, vertex_y: upd.vertex_y });
        let moved = (upd.x - x).abs();
        (x, y) = (upd.x, y_next);
        if moved <= cfg.tol {
            return finish(Status::Converged, x, y, n, trace);
        }
        if method == Method::LG && x.abs() > DIVERGENCE_LIMIT {
            trace.diverged = true;
            return finish(Status::MaxIterExceeded, x, y, n, trace);
        }
    }
    finish(Status::MaxIterExceeded, x, y, cfg.max_iter, trace)
}

/// Newton step `x − c0/c1` on local coefficients.
fn linear_step(x: f64, c0: f64, c1: f64) -> std::result::Result<f64, Status> {
    if c1.abs() < 1e-14 * (1.0 + c0.abs()) {
        return Err(Status::ZeroDerivative);
    }
    Ok(x - c0 / c1)
}

/// Classical Newton-Raphson: root of the linear derivator.
pub fn l_nr<F>(f: &F, x0: f64, cfg: &SolverConfig) -> Result<SolverResult>
where
    F: TargetFunction + ?Sized,
{
    check_preconditions(f, cfg)?;
    Ok(iterate(f, x0, cfg, Method::LNR, |x, y| {
        let d = fit_local(f, x, 1, cfg)?;
        linear_step(x, y, d.local()[1]).map(Update::to)
    }))
}

/// Cubic Newton-Raphson: real root of the cubic derivator closest to `x_n`.
///
/// When the cubic term vanishes the step falls back to the quadratic
/// derivator (closest real root), then to a linear step; the fallback is
/// recorded on the trace step.
pub fn c_nr<F>(f: &F, x0: f64, cfg: &SolverConfig) -> Result<SolverResult>
where
    F: TargetFunction + ?Sized,
{
    check_preconditions(f, cfg)?;
    Ok(iterate(f, x0, cfg, Method::CNR, |x, _| {
        let d = fit_local(f, x, 3, cfg)?;
        let c = d.local();
        // roots in s = t − x_n, so the closest root is the one nearest s = 0
        match cubic::solve_cubic(&Cubic::new(c[3], c[2], c[1], c[0])) {
            Ok(roots) => Ok(Update::to(x + cubic::closest_real_root(&roots, 0.0))),
            Err(Error::DegenerateCubic) => {
                if let Some(s) = cubic::quadratic_real_roots(c[0], c[1], c[2]).and_then(|r| cubic::closest(&r, 0.0)) {
                    return Ok(Update { x: x + s, fallback: Some(Fallback::Quadratic), vertex_y: None });
                }
                let next = linear_step(x, c[0], c[1])?;
                Ok(Update { x: next, fallback: Some(Fallback::Linear), vertex_y: None })
            }
            Err(_) => Err(Status::DomainError),
        }
    }))
}

/// Quadratic Newton-Raphson: real root of the quadratic derivator closest to
/// `x_n`. Stops with [`Status::NoRealRoot`] when the parabola misses the axis.
pub fn q_nr<F>(f: &F, x0: f64, cfg: &SolverConfig) -> Result<SolverResult>
where
    F: TargetFunction + ?Sized,
{
    check_preconditions(f, cfg)?;
    Ok(iterate(f, x0, cfg, Method::QNR, |x, _| {
        let d = fit_local(f, x, 2, cfg)?;
        let [c0, c1, c2] = [d.local()[0], d.local()[1], d.local()[2]];
        if c1 * c1 - 4.0 * c2 * c0 < 0.0 {
            return Err(Status::NoRealRoot);
        }
        match cubic::quadratic_real_roots(c0, c1, c2) {
            Some(r) => Ok(Update::to(x + cubic::closest(&r, 0.0).expect("two roots"))),
            None => {
                let next = linear_step(x, c0, c1)?;
                Ok(Update { x: next, fallback: Some(Fallback::Linear), vertex_y: None })
            }
        }
    }))
}

/// Fixed-step gradient method: `x − a·y'` (minimize) or `x + a·y'` (maximize).
pub fn l_g<F>(f: &F, x0: f64, cfg: &SolverConfig) -> Result<SolverResult>
where
    F: TargetFunction + ?Sized,
{
    check_preconditions(f, cfg)?;
    let sign = match cfg.direction {
        Direction::Minimize => -1.0,
        Direction::Maximize => 1.0,
    };
    Ok(iterate(f, x0, cfg, Method::LG, |x, _| {
        let d = fit_local(f, x, 1, cfg)?;
        Ok(Update::to(x + sign * cfg.step_a * d.local()[1]))
    }))
}

/// Quadratic gradient: jump to the vertex of the quadratic derivator.
pub fn q_g<F>(f: &F, x0: f64, cfg: &SolverConfig) -> Result<SolverResult>
where
    F: TargetFunction + ?Sized,
{
    check_preconditions(f, cfg)?;
    Ok(iterate(f, x0, cfg, Method::QG, |x, _| {
        let d = fit_local(f, x, 2, cfg)?;
        let (a1, a2) = (d.coeffs()[1], d.coeffs()[2]);
        if a2.abs() < 1e-12 * (1.0 + a1.abs()) {
            return Err(Status::DegenerateCurvature);
        }
        let [c0, c1, c2] = [d.local()[0], d.local()[1], d.local()[2]];
        Ok(Update { x: x - c1 / (2.0 * c2), fallback: None, vertex_y: Some(c0 - c1 * c1 / (4.0 * c2)) })
    }))
}

pub fn run_method<F>(method: Method, f: &F, x0: f64, cfg: &SolverConfig) -> Result<SolverResult>
where
    F: TargetFunction + ?Sized,
{
    match method {
        Method::LNR => l_nr(f, x0, cfg),
        Method::CNR => c_nr(f, x0, cfg),
        Method::QNR => q_nr(f, x0, cfg),
        Method::LG => l_g(f, x0, cfg),
        Method::QG => q_g(f, x0, cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
    /// `y'' ≈ 0`: second-derivative test is inconclusive.
    Flat,
}

/// Second-derivative test at `x` (`y'' = 2·a2` of the quadratic derivator).
pub fn classify_extremum<F>(f: &F, x: f64, backend: Backend) -> Result<ExtremumKind>
where
    F: TargetFunction + ?Sized,
{
    let d = derivator::fit(f, x, 2, backend)?;
    let curvature = 2.0 * d.local()[2];
    let scale = 1.0 + d.local()[1].abs() + d.local()[0].abs();
    Ok(if curvature.abs() <= 1e-9 * scale {
        ExtremumKind::Flat
    } else if curvature > 0.0 {
        ExtremumKind::Minimum
    } else {
        ExtremumKind::Maximum
    })
}
