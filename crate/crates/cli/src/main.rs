//! `deltabound` command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage error,
//! 3 numerical failure.

mod output;

use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltabound::critical::{beta_cr_sweep, halfline, Family};
use deltabound::dispersion1d::{solve_bound_states, BcKind, BoundaryCondition, Dispersion1dError, HalfLineProblem};
use deltabound::dispersion2d::{g_curve, solve_bound_states_2d, Dispersion2dError, InteriorBasisMode, Problem2D, SecularMode};
use deltabound::fdoracle::{fd_halfline_richardson, fd_halfline_spectrum, fd_radial_richardson, fd_radial_spectrum, FdConfig, FdError};
use deltabound::specfun::{bessel_eval, BesselKind};
use deltabound::verify::{self, Selection};
use output::{Format, Meta, Table};

#[derive(Parser)]
#[command(name = "deltabound", version, about = "Bound states and critical couplings of delta potentials")]
struct Cli {
    /// Output format for tabular commands.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Add the current Unix time to the meta block.
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound states of one problem.
    Solve(SolveArgs),
    /// Critical coupling over a range of shell offsets.
    Betacr(BetacrArgs),
    /// Samples of the interior coefficient g(k, a) for plotting.
    Gplot(GplotArgs),
    /// Finite-difference eigenvalues.
    Oracle(OracleArgs),
    /// Cylinder function values.
    Bessel(BesselArgs),
    /// Run the self-verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
    Robin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Paper,
    #[value(name = "paper-eq13")]
    PaperEq13,
    Modified,
}

impl From<Mode> for SecularMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Paper => SecularMode::Paper,
            Mode::PaperEq13 => SecularMode::PaperEq13,
            Mode::Modified => SecularMode::Modified,
        }
    }
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    dim: u8,
    /// Boundary condition at the origin (1D only).
    #[arg(long, value_enum)]
    bc: Option<Bc>,
    /// Robin parameter.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    sigma: f64,
    /// Secular equation used in 2D.
    #[arg(long, value_enum, default_value = "modified")]
    mode: Mode,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
}

#[derive(Args)]
struct BetacrArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    a_min: f64,
    #[arg(long)]
    a_max: f64,
    #[arg(long, default_value_t = 1)]
    points: usize,
    /// Logarithmic spacing in a.
    #[arg(long)]
    log: bool,
    /// Bisection width.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct GplotArgs {
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = 0.5)]
    k_min: f64,
    #[arg(long, default_value_t = 10.0)]
    k_max: f64,
    #[arg(long, default_value_t = 500)]
    points: usize,
    /// Interior basis; `paper-eq13` has no g to plot.
    #[arg(long, value_enum, default_value = "paper")]
    mode: Mode,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Grid step.
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    /// Length of the grid beyond the origin (1D) or the disk (2D).
    #[arg(long, default_value_t = 40.0)]
    extent: f64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Replace the delta by a rectangular well of this width (1D only).
    #[arg(long)]
    well_width: Option<f64>,
    /// Extrapolate from steps h and h/2.
    #[arg(long)]
    richardson: bool,
}

#[derive(Args)]
struct BesselArgs {
    #[arg(long)]
    kind: BesselKind,
    #[arg(long)]
    x_min: f64,
    /// Defaults to `--x-min`.
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long, default_value_t = 1)]
    points: usize,
    #[arg(long)]
    log: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Selection,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Dispersion1dError> for Failure {
    fn from(e: Dispersion1dError) -> Self {
        match e {
            Dispersion1dError::InvalidProblem(_) => Failure::usage(e.to_string()),
            _ => Failure::numerical(e.to_string()),
        }
    }
}

impl From<Dispersion2dError> for Failure {
    fn from(e: Dispersion2dError) -> Self {
        match e {
            Dispersion2dError::InvalidProblem(_) => Failure::usage(e.to_string()),
            _ => Failure::numerical(e.to_string()),
        }
    }
}

impl From<FdError> for Failure {
    fn from(e: FdError) -> Self {
        match e {
            FdError::InvalidConfig(_) | FdError::InvalidProblem(_) => Failure::usage(e.to_string()),
            FdError::Tridiag(_) => Failure::numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::numerical(format!("output failed: {e}"))
    }
}

type Outcome = Result<u8, Failure>;

fn bc_kind(bc: Bc) -> BcKind {
    match bc {
        Bc::Dirichlet => BcKind::Dirichlet,
        Bc::Neumann => BcKind::Neumann,
        Bc::Robin => BcKind::Robin,
    }
}

fn boundary(bc: Bc, sigma: f64) -> BoundaryCondition<f64> {
    match bc {
        Bc::Dirichlet => BoundaryCondition::dirichlet(),
        Bc::Neumann => BoundaryCondition::neumann(),
        Bc::Robin => BoundaryCondition::robin(sigma),
    }
}

impl ProblemArgs {
    /// The 1D condition; required in 1D, warned about and dropped in 2D.
    fn bc(&self) -> Result<Option<Bc>, Failure> {
        match (self.dim, self.bc) {
            (1, Some(bc)) => Ok(Some(bc)),
            (1, None) => Err(Failure::usage("--bc is required when --dim 1")),
            (_, Some(_)) => {
                eprintln!("warning: --bc is ignored for --dim 2 (the disk is always Dirichlet)");
                Ok(None)
            }
            _ => Ok(None),
        }
    }

    fn echo(&self, meta: &mut Meta, bc: Option<Bc>) {
        meta.set("dim", self.dim);
        match bc {
            Some(bc) => {
                meta.set("bc", bc_kind(bc).to_string());
                if bc == Bc::Robin {
                    meta.num("sigma", self.sigma);
                }
            }
            None => meta.set("mode", SecularMode::from(self.mode).name()),
        }
    }
}

fn grid(lo: f64, hi: f64, points: usize, log: bool) -> Result<Vec<f64>, Failure> {
    if points == 0 {
        return Err(Failure::usage("--points must be at least 1"));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Failure::usage(format!("empty range [{lo}, {hi}]")));
    }
    if log && !(lo > 0.0) {
        return Err(Failure::usage("--log needs a positive lower end"));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / n;
            match i {
                0 => lo,
                _ if i + 1 == points => hi,
                _ if log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
                _ => lo + (hi - lo) * t,
            }
        })
        .collect())
}

fn cmd_solve(args: &SolveArgs, format: Format, mut meta: Meta) -> Outcome {
    let bc = args.problem.bc()?;
    args.problem.echo(&mut meta, bc);
    meta.num("a", args.a);
    meta.num("beta", args.beta);
    let states = match bc {
        Some(bc) => solve_bound_states(&HalfLineProblem::new(args.a, args.beta, boundary(bc, args.problem.sigma))?)?,
        None => solve_bound_states_2d(&Problem2D::new(args.a, args.beta, args.problem.mode.into())?)?,
    };
    meta.set("count", states.len());
    let mut table = Table::new(&["k", "lambda", "dispersion_residual", "jump_residual"]);
    for s in &states {
        table.push(vec![s.k.into(), s.lambda.into(), s.dispersion_residual.into(), s.jump_residual.into()]);
    }
    table.emit(format, &meta)?;
    if let Some(s) = states.iter().find(|s| !s.converged) {
        return Err(Failure::numerical(format!("root at k = {} did not converge", s.k)));
    }
    Ok(0)
}

fn cmd_betacr(args: &BetacrArgs, format: Format, mut meta: Meta) -> Outcome {
    let bc = args.problem.bc()?;
    args.problem.echo(&mut meta, bc);
    if !(args.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    if !(args.a_min > 0.0) {
        return Err(Failure::usage("--a-min must be positive"));
    }
    let a_values = grid(args.a_min, args.a_max, args.points, args.log)?;
    meta.num("tol", args.tol);
    let family = match bc {
        Some(bc) => halfline(a_values[0], bc_kind(bc), args.problem.sigma),
        None => Family::Radial {
            a: a_values[0],
            mode: args.problem.mode.into(),
        },
    };
    let rows = beta_cr_sweep(&a_values, &family, args.tol);
    let mut table = Table::new(&["a", "beta_cr", "method", "status", "check", "error"]);
    for row in &rows {
        table.push(vec![
            row.a.into(),
            row.beta_cr.into(),
            row.method.map_or("", |m| m.name()).into(),
            row.status.map_or(String::new(), |s| format!("{s:?}").to_lowercase()).into(),
            row.check.into(),
            row.error.clone().unwrap_or_default().into(),
        ]);
    }
    meta.set("count", rows.len());
    table.emit(format, &meta)?;
    let failed: Vec<&str> = rows.iter().filter_map(|r| r.error.as_deref()).collect();
    if !failed.is_empty() {
        return Err(Failure::numerical(format!("{} row(s) failed: {}", failed.len(), failed[0])));
    }
    Ok(0)
}

fn cmd_gplot(args: &GplotArgs, format: Format, mut meta: Meta) -> Outcome {
    let basis = match args.mode {
        Mode::Paper => InteriorBasisMode::PaperLiteral,
        Mode::Modified => InteriorBasisMode::ModifiedInterior,
        Mode::PaperEq13 => return Err(Failure::usage("gplot needs --mode paper or modified")),
    };
    if !(args.k_min > 0.0) || !(args.k_min < args.k_max) || args.points < 2 {
        return Err(Failure::usage("need 0 < --k-min < --k-max and --points ≥ 2"));
    }
    let curve = g_curve(args.a, args.k_min, args.k_max, args.points, basis)?;
    meta.num("a", args.a);
    meta.set("mode", SecularMode::from(args.mode).name());
    meta.set("points", args.points);
    meta.set("non_pole", curve.non_pole);
    meta.set("near_minus_one", curve.near_minus_one);
    meta.num("fraction_near_minus_one", curve.fraction_near_minus_one);
    let mut table = Table::new(&["k", "g", "pole"]);
    for s in &curve.samples {
        table.push(vec![s.k.into(), s.g.into(), s.pole.into()]);
    }
    table.emit(format, &meta)?;
    Ok(0)
}

fn cmd_oracle(args: &OracleArgs, format: Format, mut meta: Meta) -> Outcome {
    let bc = args.problem.bc()?;
    args.problem.echo(&mut meta, bc);
    meta.num("a", args.a);
    meta.num("beta", args.beta);
    meta.num("h", args.h);
    meta.num("extent", args.extent);
    meta.set("richardson", args.richardson);
    if args.count == 0 {
        return Err(Failure::usage("--count must be at least 1"));
    }
    let config = match args.well_width {
        Some(w) => {
            if bc.is_none() {
                return Err(Failure::usage("--well-width applies to --dim 1 only"));
            }
            meta.num("well_width", w);
            FdConfig::narrow_well(args.h, args.extent, w)
        }
        None => FdConfig::on_node(args.h, args.extent),
    };

    if let Some(bc) = bc {
        let problem = HalfLineProblem::new(args.a, args.beta, boundary(bc, args.problem.sigma))?;
        let fd = if args.richardson {
            fd_halfline_richardson(&problem, &config, args.count)?
        } else {
            fd_halfline_spectrum(&problem, &config, args.count)?
        };
        let analytic = solve_bound_states(&problem)?;
        let mut table = Table::new(&["index", "lambda", "analytic_lambda", "rel_diff"]);
        for (i, &l) in fd.iter().enumerate() {
            let exact = analytic.get(i).map_or(f64::NAN, |s| s.lambda);
            table.push(vec![i.into(), l.into(), exact.into(), ((l - exact) / exact).abs().into()]);
        }
        meta.set("count", fd.len());
        table.emit(format, &meta)?;
        return Ok(0);
    }

    // Radial: each oracle eigenvalue against the nearest analytic one per mode.
    let fd = if args.richardson {
        fd_radial_richardson(args.a, args.beta, &config, args.count)?
    } else {
        fd_radial_spectrum(args.a, args.beta, &config, args.count)?
    };
    let mut table = Table::new(&["mode", "index", "fd_lambda", "nearest_analytic", "rel_diff", "analytic_count"]);
    for mode in SecularMode::ALL {
        let states = solve_bound_states_2d(&Problem2D::new(args.a, args.beta, mode)?)?;
        for (i, &l) in fd.iter().enumerate() {
            let nearest = states
                .iter()
                .map(|s| s.lambda)
                .min_by(|x, y| (x - l).abs().total_cmp(&(y - l).abs()))
                .unwrap_or(f64::NAN);
            table.push(vec![
                mode.name().into(),
                i.into(),
                l.into(),
                nearest.into(),
                ((l - nearest) / nearest).abs().into(),
                states.len().into(),
            ]);
        }
    }
    meta.set("count", fd.len());
    table.emit(format, &meta)?;
    Ok(0)
}

fn cmd_bessel(args: &BesselArgs, format: Format, mut meta: Meta) -> Outcome {
    let xs = grid(args.x_min, args.x_max.unwrap_or(args.x_min), args.points, args.log)?;
    meta.set("kind", args.kind.to_string());
    let mut table = Table::new(&["x", "value"]);
    for x in xs {
        let v = bessel_eval(args.kind, x).map_err(|e| Failure::usage(e.to_string()))?;
        table.push(vec![x.into(), v.into()]);
    }
    table.emit(format, &meta)?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, mut meta: Meta) -> Outcome {
    if !(args.tol_scale > 0.0 && args.tol_scale.is_finite()) {
        return Err(Failure::usage("--tol-scale must be positive"));
    }
    let report = verify::run(args.suite, args.tol_scale);

    for check in &report.checks {
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        eprintln!(
            "{verdict} [{}] {}: {:.3e} (limit {:.3e}) {}",
            check.suite, check.name, check.value, check.limit, check.detail
        );
    }
    for m in &report.measurements {
        eprintln!("INFO [{}] {}: {:.6e} {}", m.suite, m.name, m.value, m.detail);
    }
    eprintln!(
        "arbitration winner: {}",
        report.arbitration_winner.as_deref().unwrap_or("none")
    );
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    eprintln!("{} checks, {failed} failed", report.checks.len());

    meta.set("suites", report.suites.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
    let mut top = serde_json::Map::new();
    top.insert("meta".into(), meta.to_json());
    top.insert("report".into(), serde_json::to_value(&report).map_err(|e| Failure::numerical(e.to_string()))?);
    println!("{}", serde_json::Value::Object(top));
    Ok(if report.passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match &cli.command {
        Command::Solve(_) => "solve",
        Command::Betacr(_) => "betacr",
        Command::Gplot(_) => "gplot",
        Command::Oracle(_) => "oracle",
        Command::Bessel(_) => "bessel",
        Command::Verify(_) => "verify",
    };
    let mut meta = Meta::new(name);
    if cli.stamp {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        meta.set("stamp", now);
    }
    let outcome = match &cli.command {
        Command::Solve(args) => cmd_solve(args, cli.format, meta),
        Command::Betacr(args) => cmd_betacr(args, cli.format, meta),
        Command::Gplot(args) => cmd_gplot(args, cli.format, meta),
        Command::Oracle(args) => cmd_oracle(args, cli.format, meta),
        Command::Bessel(args) => cmd_bessel(args, cli.format, meta),
        Command::Verify(args) => cmd_verify(args, meta),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

