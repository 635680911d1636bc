//! `gendrv`: run the generalized-derivative solvers from the command line.
//!
//! Every subcommand prints one JSON document on stdout. Exit codes: 0 success,
//! 2 parse or usage error, 3 single run did not converge (or produced no
//! result), 4 IO error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gendrv_core::bench::{emit_csv, emit_json, run_sweep, summarize, SweepSpec};
use gendrv_core::cubic::{depress, discriminant, solve_cubic, Cubic};
use gendrv_core::derivator::{default_delta, fit, Backend};
use gendrv_core::solvers::{run_method, Direction, Method, SolverConfig, SolverResult, Status};
use gendrv_core::target::resolve;
use gendrv_core::Error;
use serde_json::{json, Value};

const EXIT_USAGE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "gendrv", version, about = "Root and extremum finding with generalized derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a root from one initial guess
    #[command(allow_negative_numbers = true)]
    Roots {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        method: RootMethod,
        #[arg(long)]
        x0: f64,
        #[command(flatten)]
        solver: SolverArgs,
        /// Include the iterate trace in the output
        #[arg(long)]
        trace: bool,
    },
    /// Find an extremum from one initial guess
    #[command(allow_negative_numbers = true)]
    Extrema {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        method: ExtremumMethod,
        #[arg(long)]
        x0: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        gradient: GradientArgs,
        #[arg(long)]
        trace: bool,
    },
    /// Run methods over a grid of initial guesses and write CSV/JSON
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        target: TargetArgs,
        /// Comma-separated method names, e.g. l-nr,c-nr
        #[arg(long, value_delimiter = ',', required = true)]
        methods: Vec<Method>,
        /// Grid as start:end:count
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        x0_range: (f64, f64, usize),
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        gradient: GradientArgs,
        #[arg(long)]
        out_csv: PathBuf,
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
    /// Print derivator coefficients at a point
    #[command(allow_negative_numbers = true)]
    Coeffs {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        x: f64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        degree: u8,
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        /// Node spacing; implies the finite-difference backend
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Solve a x³ + b x² + c x + d = 0
    #[command(allow_negative_numbers = true)]
    CubicSolve {
        /// a,b,c,d
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
}

#[derive(Args)]
struct TargetArgs {
    /// Expression in x, or builtin:<name>
    #[arg(long, default_value = "builtin:quartic-y")]
    function: String,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Node spacing; implies the finite-difference backend
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct GradientArgs {
    /// L-G step size
    #[arg(long, default_value_t = 0.05)]
    step_a: f64,
    #[arg(long, value_enum, default_value_t = DirectionArg::Min)]
    direction: DirectionArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum RootMethod {
    #[value(name = "l-nr")]
    Linear,
    #[value(name = "c-nr")]
    Cubic,
    #[value(name = "q-nr")]
    Quadratic,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtremumMethod {
    #[value(name = "l-g")]
    LG,
    #[value(name = "q-g")]
    QG,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Analytic,
    Fd,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Min,
    Max,
}

impl From<RootMethod> for Method {
    fn from(m: RootMethod) -> Self {
        match m {
            RootMethod::Linear => Method::LNR,
            RootMethod::Cubic => Method::CNR,
            RootMethod::Quadratic => Method::QNR,
        }
    }
}

impl From<ExtremumMethod> for Method {
    fn from(m: ExtremumMethod) -> Self {
        match m {
            ExtremumMethod::LG => Method::LG,
            ExtremumMethod::QG => Method::QG,
        }
    }
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Min => Direction::Minimize,
            DirectionArg::Max => Direction::Maximize,
        }
    }
}

fn backend(choice: Option<BackendArg>, delta: Option<f64>) -> Result<Backend, Error> {
    match (choice, delta) {
        (Some(BackendArg::Analytic), Some(_)) => {
            Err(Error::InvalidConfig("--delta applies only to the fd backend".into()))
        }
        (Some(BackendArg::Analytic), None) | (None, None) => Ok(Backend::Analytic),
        (Some(BackendArg::Fd), d) | (None, d @ Some(_)) => Ok(Backend::FiniteDifference(d)),
    }
}

fn config(solver: &SolverArgs, gradient: Option<&GradientArgs>) -> Result<SolverConfig, Error> {
    let mut cfg = SolverConfig {
        tol: solver.tol,
        max_iter: solver.max_iter,
        backend: backend(solver.backend, solver.delta)?,
        ..SolverConfig::default()
    };
    if let Some(g) = gradient {
        cfg.step_a = g.step_a;
        cfg.direction = g.direction.into();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_range(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, end, count] = parts[..] else {
        return Err(format!("expected start:end:count, got `{s}`"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let count = count.trim().parse::<usize>().map_err(|e| format!("count `{count}`: {e}"))?;
    Ok((num(start)?, num(end)?, count))
}

fn single_run(
    function: &str,
    method: Method,
    x0: f64,
    cfg: &SolverConfig,
    trace: bool,
) -> Result<(Value, Status), Error> {
    let f = resolve(function)?;
    let SolverResult { status, x_star, y_star, iterations, trace: steps } = run_method(method, &f, x0, cfg)?;
    let mut out = json!({
        "method": method,
        "function": function,
        "x0": x0,
        "status": status,
        "x_star": x_star,
        "y_star": y_star,
        "iterations": iterations,
    });
    if trace {
        out["trace"] = serde_json::to_value(&steps).expect("trace serializes");
    }
    Ok((out, status))
}

fn run(cmd: Command) -> Result<(Value, u8), Error> {
    let converged = |status: Status| if status == Status::Converged { 0 } else { EXIT_NOT_CONVERGED };
    match cmd {
        Command::Roots { target, method, x0, solver, trace } => {
            let cfg = config(&solver, None)?;
            let (out, status) = single_run(&target.function, method.into(), x0, &cfg, trace)?;
            Ok((out, converged(status)))
        }
        Command::Extrema { target, method, x0, solver, gradient, trace } => {
            let cfg = config(&solver, Some(&gradient))?;
            let (out, status) = single_run(&target.function, method.into(), x0, &cfg, trace)?;
            Ok((out, converged(status)))
        }
        Command::Sweep { target, methods, x0_range, solver, gradient, out_csv, out_json } => {
            let (x0_start, x0_end, x0_count) = x0_range;
            let spec = SweepSpec {
                function: target.function,
                methods,
                x0_start,
                x0_end,
                x0_count,
                config: config(&solver, Some(&gradient))?,
            };
            let records = run_sweep(&spec)?;
            let stats = summarize(&records);
            emit_csv(&records, &out_csv)?;
            if let Some(path) = &out_json {
                emit_json(&records, &stats, &spec, path)?;
            }
            Ok((json!({ "records": records.len(), "csv": out_csv, "json": out_json, "stats": stats }), 0))
        }
        Command::Coeffs { target, x, degree, backend: choice, delta } => {
            let f = resolve(&target.function)?;
            let degree = usize::from(degree);
            let b = backend(choice, delta)?;
            let c = fit(&f, x, degree, b)?;
            let (name, delta) = match b {
                Backend::Analytic => ("analytic", None),
                Backend::FiniteDifference(d) => ("fd", Some(d.unwrap_or_else(|| default_delta(x, degree)))),
            };
            Ok((
                json!({
                    "x": x,
                    "degree": degree,
                    "backend": name,
                    "delta": delta,
                    "coeffs": c.coeffs(),
                    "local": c.local(),
                }),
                0,
            ))
        }
        Command::CubicSolve { coeffs } => {
            let parsed: Vec<f64> = coeffs
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Error::InvalidConfig(format!("--coeffs `{coeffs}`: {e}")))?;
            let [a, b, c, d] = parsed[..] else {
                return Err(Error::InvalidConfig(format!("--coeffs needs 4 values, got {}", parsed.len())));
            };
            let cubic = Cubic::new(a, b, c, d);
            let roots = solve_cubic(&cubic)?;
            Ok((
                json!({
                    "coeffs": [a, b, c, d],
                    "case": roots.case,
                    "discriminant": discriminant(&depress(&cubic)?),
                    "roots": roots.real_roots,
                    "multiplicities": roots.multiplicities,
                }),
                0,
            ))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::Json { .. } => EXIT_IO,
        Error::Domain(_) | Error::SingularSystem { .. } => EXIT_NOT_CONVERGED,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error for a JSON printer
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&out).expect("JSON output"));
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
