//! Command-line surface of the crate.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
//! error (non-convergence, missing root, iteration cap, ...).

pub mod verify;

use crate::error::{Error, Result};
use crate::expr;
use crate::greens::{self, GreenKernel, ProblemParams};
use crate::grid::{chebyshev_points, WGridFunction, DEFAULT_GRID};
use crate::mlf::{ml_eval, MLArgs};
use crate::solver::{self, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::spectrum;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "fracbvp",
    version,
    about = "Fractional-order mixed boundary value problems: eigenvalues, Green's functions, fixed-point solvers"
)]
pub struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format for datasets and reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for randomized sampling inside verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Evaluate the two-parameter Mittag-Leffler function E_(alpha,beta)(x).
    #[command(allow_negative_numbers = true)]
    Ml {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        x: f64,
    },
    /// Locate eigenvalues of the mixed, Dirichlet and subinterval problems.
    Spectrum {
        #[command(subcommand)]
        cmd: SpectrumCmd,
    },
    /// Evaluate the Green's function, its bounds and its sign.
    Green {
        #[command(subcommand)]
        cmd: GreenCmd,
    },
    /// Solve the linear problem or run a fixed-point iteration.
    Solve {
        #[command(subcommand)]
        cmd: SolveCmd,
    },
    /// Run the reproduction and invariant suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Principal eigenvalue of the mixed problem (largest zero of
    /// E_(alpha,alpha-1)).
    #[command(allow_negative_numbers = true)]
    Mixed {
        #[arg(long)]
        alpha: f64,
    },
    /// Principal Dirichlet eigenvalue (largest zero of E_(alpha,alpha)).
    #[command(allow_negative_numbers = true)]
    Dirichlet {
        #[arg(long)]
        alpha: f64,
    },
    /// Largest eigenvalue of the problem restricted to (t0, 1).
    #[command(allow_negative_numbers = true)]
    Subinterval {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t0: f64,
    },
    /// Tabulate eigenvalues over grids of alpha and t0.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long, conflicts_with = "alpha_range")]
        alpha: Option<f64>,
        /// Order grid as lo:hi:step.
        #[arg(long)]
        alpha_range: Option<String>,
        #[arg(long, conflicts_with = "t0_range")]
        t0: Option<f64>,
        /// Subinterval grid as lo:hi:step.
        #[arg(long)]
        t0_range: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
}

#[derive(Debug, Subcommand)]
pub enum GreenCmd {
    /// G(t,s) at a single point.
    #[command(allow_negative_numbers = true)]
    Eval {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        s: f64,
    },
    /// Tabulate G and the weighted extension H over a grid.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 33)]
        grid: usize,
    },
    /// Bound pair m(t), M and the cone constant m0.
    #[command(allow_negative_numbers = true)]
    Bounds {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 257)]
        grid: usize,
        #[arg(long, default_value_t = 0.25)]
        c1: f64,
    },
    /// Sign scan of G over an interior grid.
    #[command(allow_negative_numbers = true)]
    Positivity {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 257)]
        grid: usize,
    },
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Weighted value prescribed at the left endpoint.
    #[arg(long = "A", default_value_t = 0.0)]
    pub bc_a: f64,
    /// Slope prescribed at the right endpoint.
    #[arg(long = "B", default_value_t = 0.0)]
    pub bc_b: f64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
}

impl ProblemArgs {
    fn params(&self) -> ProblemParams {
        ProblemParams::new(self.alpha, self.lambda).with_boundary(self.bc_a, self.bc_b)
    }
}

#[derive(Debug, Subcommand)]
pub enum SolveCmd {
    /// Solve D^alpha u - lambda u + y = 0 with the given boundary data.
    #[command(allow_negative_numbers = true)]
    Linear {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Right-hand side y(t) as an expression in t.
        #[arg(long)]
        rhs_expr: String,
    },
    /// Picard iteration for the nonlinear problem with f(t,u).
    #[command(allow_negative_numbers = true)]
    Picard {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Nonlinearity f(t,u); u denotes the weighted value.
        #[arg(long, conflicts_with = "builtin")]
        f_expr: Option<String>,
        /// Registered nonlinearity, e.g. example2 or example1b(2).
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Lipschitz constant of f in u; attaches a contraction certificate.
        #[arg(long)]
        lipschitz: Option<f64>,
    },
    /// Monotone iteration between lower and upper candidates.
    #[command(allow_negative_numbers = true)]
    Monotone {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, conflicts_with = "builtin")]
        f_expr: Option<String>,
        #[arg(long)]
        builtin: Option<String>,
        /// Two-column CSV (t, w) with the lower candidate.
        #[arg(long)]
        lower_file: PathBuf,
        /// Two-column CSV (t, w) with the upper candidate.
        #[arg(long)]
        upper_file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Reproduce the tabulated first eigenvalues.
    #[command(allow_negative_numbers = true)]
    Table1 {
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Eigenvalue ordering properties behind the figures.
    Figures {
        #[arg(long)]
        fast: bool,
    },
    /// Every module's invariants-and-properties suite.
    Invariants {
        #[arg(long)]
        fast: bool,
    },
    /// The worked-example pipelines.
    Examples,
}

/// Parse and dispatch, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap reserves 0 for --help/--version and 2 for usage errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidParams(_)
                | Error::SyntaxError { .. }
                | Error::UnknownBuiltin(_)
                | Error::GridMismatch(_)
                | Error::DomainError(_) => 2,
                _ => 3,
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let mut out = String::new();
    let code = match &cli.cmd {
        Cmd::Ml { alpha, beta, x } => {
            let value = ml_eval(MLArgs::new(*alpha, *beta, *x))?;
            match cli.format {
                Format::Json => {
                    writeln!(out, "{{\"value\": {}}}", json_f64(value)).unwrap();
                }
                Format::Csv => writeln!(out, "{}", fmt_sig(value, 6)).unwrap(),
            }
            0
        }
        Cmd::Spectrum { cmd } => run_spectrum(cmd, cli.format, &mut out)?,
        Cmd::Green { cmd } => run_green(cmd, cli.format, &mut out)?,
        Cmd::Solve { cmd } => run_solve(cmd, cli.format, &mut out)?,
        Cmd::Verify { cmd } => {
            let checks = match cmd {
                VerifyCmd::Table1 { tol } => verify::table1_checks(*tol)?,
                VerifyCmd::Figures { fast } => verify::figure_checks(*fast)?,
                VerifyCmd::Invariants { fast } => verify::invariant_checks(*fast, cli.seed)?,
                VerifyCmd::Examples => verify::example_checks()?,
            };
            let mut failed = 0usize;
            for c in &checks {
                let tag = if c.passed { "ok  " } else { "FAIL" };
                writeln!(out, "{tag} {} — {}", c.name, c.detail).unwrap();
                if !c.passed {
                    failed += 1;
                }
            }
            writeln!(out, "{} checks, {} failed", checks.len(), failed).unwrap();
            if failed > 0 {
                1
            } else {
                0
            }
        }
    };
    write_output(cli, &out)?;
    Ok(code)
}

fn run_spectrum(cmd: &SpectrumCmd, format: Format, out: &mut String) -> Result<i32> {
    match cmd {
        SpectrumCmd::Mixed { alpha } => {
            let r = spectrum::principal_mixed_eigenvalue(*alpha)?;
            write_eigen(&r, format, out);
        }
        SpectrumCmd::Dirichlet { alpha } => {
            let r = spectrum::principal_dirichlet_eigenvalue(*alpha)?;
            write_eigen(&r, format, out);
        }
        SpectrumCmd::Subinterval { alpha, t0 } => {
            let r = spectrum::subinterval_eigenvalue(*alpha, *t0)?;
            write_eigen(&r, format, out);
        }
        SpectrumCmd::Scan {
            alpha,
            alpha_range,
            t0,
            t0_range,
        } => {
            let alphas = grid_from(alpha, alpha_range, "alpha")?;
            let t0s = match (t0, t0_range) {
                (None, None) => Vec::new(),
                _ => grid_from(t0, t0_range, "t0")?,
            };
            let rows = spectrum::eigen_scan(&alphas, &t0s)?;
            match format {
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&rows).unwrap()).unwrap()
                }
                Format::Csv => {
                    writeln!(out, "# alpha,t0,lambda_bar_1,lambda_star_1,lambda_1").unwrap();
                    for r in rows {
                        writeln!(
                            out,
                            "{},{},{},{},{}",
                            fmt_e(r.alpha),
                            r.t0.map(fmt_e).unwrap_or_default(),
                            r.lambda_bar_1.map(fmt_e).unwrap_or_default(),
                            fmt_e(r.lambda_star_1),
                            fmt_e(r.lambda_1)
                        )
                        .unwrap();
                    }
                }
            }
        }
    }
    Ok(0)
}

fn write_eigen(r: &spectrum::EigenResult, format: Format, out: &mut String) {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(r).unwrap()).unwrap(),
        Format::Csv => writeln!(out, "{}", fmt_sig(r.value, 6)).unwrap(),
    }
}

fn run_green(cmd: &GreenCmd, format: Format, out: &mut String) -> Result<i32> {
    match cmd {
        GreenCmd::Eval { kernel, t, s } => {
            let params = ProblemParams::new(kernel.alpha, kernel.lambda);
            let g = greens::green_eval(&params, *t, *s)?;
            match format {
                Format::Json => writeln!(out, "{{\"value\": {}}}", json_f64(g)).unwrap(),
                Format::Csv => writeln!(out, "{}", fmt_sig(g, 6)).unwrap(),
            }
        }
        GreenCmd::Scan { kernel, grid } => {
            let params = ProblemParams::new(kernel.alpha, kernel.lambda);
            let k = GreenKernel::new(&params)?;
            let n = (*grid).max(2);
            writeln!(out, "# t,s,G,H").unwrap();
            for i in 0..n {
                let t = i as f64 / (n - 1) as f64;
                for j in 0..n {
                    let s = j as f64 / n as f64;
                    let g = k.eval(t, s)?;
                    let h = if k.positive_regime() {
                        fmt_e(k.h_tilde(t, s)?)
                    } else {
                        String::new()
                    };
                    writeln!(out, "{},{},{},{}", fmt_e(t), fmt_e(s), fmt_e(g), h).unwrap();
                }
            }
        }
        GreenCmd::Bounds { kernel, grid, c1 } => {
            let params = ProblemParams::new(kernel.alpha, kernel.lambda);
            let env = greens::bounds_envelope(&params, *grid, *c1)?;
            match format {
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&env).unwrap()).unwrap()
                }
                Format::Csv => {
                    writeln!(out, "# t,m").unwrap();
                    writeln!(
                        out,
                        "# M={} m0={} c1={}",
                        fmt_e(env.big_m),
                        fmt_e(env.m0),
                        fmt_e(env.c1)
                    )
                    .unwrap();
                    for (t, m) in env.t_grid.iter().zip(&env.m_grid) {
                        writeln!(out, "{},{}", fmt_e(*t), fmt_e(*m)).unwrap();
                    }
                }
            }
        }
        GreenCmd::Positivity { kernel, grid } => {
            let params = ProblemParams::new(kernel.alpha, kernel.lambda);
            let report = greens::positivity_report(&params, *grid)?;
            match format {
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap()).unwrap()
                }
                Format::Csv => {
                    writeln!(
                        out,
                        "all_positive={} min_value={} argmin=({},{}) lambda_star={}",
                        report.all_positive,
                        fmt_e(report.min_value),
                        fmt_e(report.argmin.0),
                        fmt_e(report.argmin.1),
                        fmt_e(report.lambda_star)
                    )
                    .unwrap();
                }
            }
        }
    }
    Ok(0)
}

fn nonlinearity(
    f_expr: &Option<String>,
    builtin: &Option<String>,
    alpha: f64,
    lambda: f64,
) -> Result<expr::Expr> {
    match (f_expr, builtin) {
        (Some(src), None) => expr::parse(src),
        (None, Some(spec)) => {
            let (name, mut args) = expr::parse_builtin_spec(spec)?;
            // example3's formula needs the problem's own lambda and alpha
            // when the argument carries only the exponent p.
            if name == "example3" && args.len() == 1 {
                args.push(lambda);
                args.push(alpha);
            }
            expr::builtin(&name, &args)
        }
        _ => Err(Error::InvalidParams(
            "exactly one of --f-expr and --builtin is required".into(),
        )),
    }
}

fn run_solve(cmd: &SolveCmd, format: Format, out: &mut String) -> Result<i32> {
    match cmd {
        SolveCmd::Linear { problem, rhs_expr } => {
            let rhs = expr::parse(rhs_expr)?;
            let y = move |s: f64| rhs.eval(s, 0.0).unwrap_or(f64::NAN);
            let sol = solver::solve_linear_on(&problem.params(), &y, problem.grid)?;
            write_solution(&sol, format, out);
        }
        SolveCmd::Picard {
            problem,
            f_expr,
            builtin,
            tol,
            max_iter,
            lipschitz,
        } => {
            let params = problem.params();
            let f = nonlinearity(f_expr, builtin, params.alpha, params.lambda)?;
            let start = WGridFunction::new(
                chebyshev_points(problem.grid),
                vec![0.0; problem.grid],
                params.alpha,
            )?;
            let mut report =
                solver::picard_solve_on(&params, &f.as_fn(), &start, *tol, *max_iter, problem.grid)?;
            if let Some(k) = lipschitz {
                let env = greens::bounds_envelope(&params, 257, 0.25)?;
                let (q, _) = solver::contraction_certificate(&params, *k, &env);
                report.certificate_q = Some(q);
            }
            write_report(&report, format, out);
        }
        SolveCmd::Monotone {
            problem,
            f_expr,
            builtin,
            lower_file,
            upper_file,
            tol,
            max_iter,
        } => {
            let params = problem.params();
            let f = nonlinearity(f_expr, builtin, params.alpha, params.lambda)?;
            let lower = read_candidate(lower_file, params.alpha)?;
            let upper = read_candidate(upper_file, params.alpha)?;
            let report = solver::monotone_solve_on(
                &params,
                &f.as_fn(),
                &lower,
                &upper,
                *tol,
                *max_iter,
                problem.grid,
            )?;
            write_report(&report, format, out);
        }
    }
    Ok(0)
}

fn write_solution(sol: &WGridFunction, format: Format, out: &mut String) {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(sol).unwrap()).unwrap(),
        Format::Csv => {
            writeln!(out, "# t,w,u").unwrap();
            let us = sol.u_values();
            for ((&t, &w), &u) in sol.grid().iter().zip(sol.w_values()).zip(&us) {
                writeln!(out, "{},{},{}", fmt_e(t), fmt_e(w), fmt_e(u)).unwrap();
            }
        }
    }
}

fn write_report(report: &solver::SolverReport, format: Format, out: &mut String) {
    match format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(report).unwrap()).unwrap()
        }
        Format::Csv => {
            writeln!(
                out,
                "# converged={} iterations={} residual_fp={} residual_ode={}{}",
                report.converged,
                report.iterations,
                fmt_e(report.residual_fp),
                fmt_e(report.residual_ode),
                report
                    .certificate_q
                    .map(|q| format!(" certificate_q={}", fmt_e(q)))
                    .unwrap_or_default()
            )
            .unwrap();
            write_solution(&report.solution, format, out);
        }
    }
}

/// Two-column CSV (t, w); '#' lines and blank lines are skipped.
fn read_candidate(path: &PathBuf, alpha: f64) -> Result<WGridFunction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParams(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',');
        let t: f64 = cols
            .next()
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| bad_row(path, lineno))?;
        let w: f64 = cols
            .next()
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| bad_row(path, lineno))?;
        points.push((t, w));
    }
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (grid, w): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    WGridFunction::new(grid, w, alpha)
}

fn bad_row(path: &std::path::Path, lineno: usize) -> Error {
    Error::InvalidParams(format!(
        "{}:{}: expected two comma-separated numbers",
        path.display(),
        lineno + 1
    ))
}

fn write_output(cli: &Cli, content: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            Error::InvalidParams(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// lo:hi:step grid or a single value.
fn grid_from(single: &Option<f64>, range: &Option<String>, what: &str) -> Result<Vec<f64>> {
    match (single, range) {
        (Some(v), None) => Ok(vec![*v]),
        (None, Some(spec)) => {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidParams(format!(
                    "--{what}-range must be lo:hi:step, got `{spec}`"
                )));
            }
            let lo: f64 = parts[0].parse().map_err(|_| bad_range(what, spec))?;
            let hi: f64 = parts[1].parse().map_err(|_| bad_range(what, spec))?;
            let step: f64 = parts[2].parse().map_err(|_| bad_range(what, spec))?;
            if step <= 0.0 || hi < lo {
                return Err(bad_range(what, spec));
            }
            let mut values = Vec::new();
            let mut v = lo;
            while v <= hi + 1e-12 * step {
                values.push(v.min(hi));
                v += step;
            }
            Ok(values)
        }
        _ => Err(Error::InvalidParams(format!(
            "exactly one of --{what} and --{what}-range is required"
        ))),
    }
}

fn bad_range(what: &str, spec: &str) -> Error {
    Error::InvalidParams(format!("malformed --{what}-range `{spec}`"))
}

/// Scientific notation with 12 significant digits (CSV convention).
pub fn fmt_e(v: f64) -> String {
    format!("{v:.11e}")
}

fn json_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        "null".into()
    }
}

/// Fixed number of significant digits with trailing zeros trimmed, for
/// single-value human output.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
