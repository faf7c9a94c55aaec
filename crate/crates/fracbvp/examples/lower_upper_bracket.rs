//! Lower/upper-solution machinery: verify candidate brackets through the
//! discrete fractional derivative, then run the monotone (truncated Picard)
//! iteration between them.
//!
//! The first configuration is consistent and the computed solution stays
//! inside its bracket. The second is the registered p-Laplacian example
//! with a negative right slope: the candidates verify against the stated
//! inequalities, yet the converged solution of the truncated problem drops
//! below the lower candidate — the bracket inference does not hold for
//! this boundary data, and the report shows it honestly.
//!
//! Run with `cargo run --example lower_upper_bracket`.

use fracbvp::expr;
use fracbvp::greens::ProblemParams;
use fracbvp::grid::{chebyshev_points, WGridFunction};
use fracbvp::solver::{check_lower_upper, monotone_solve, CandidateKind};

fn bracket_excess(report: &fracbvp::solver::SolverReport, lo: impl Fn(f64) -> f64) -> f64 {
    report
        .solution
        .grid()
        .iter()
        .zip(report.solution.w_values())
        .map(|(&t, &w)| lo(t) - w)
        .fold(0.0f64, f64::max)
}

fn main() -> fracbvp::Result<()> {
    // Consistent data: f = 1 between 0 and t.
    let params = ProblemParams::new(2.0, 0.0);
    let gamma = WGridFunction::constant(0.0, 2.0);
    let delta = WGridFunction::from_weighted_fn(chebyshev_points(129), 2.0, |t| t);
    let report = monotone_solve(&params, &|_, _| 1.0, &gamma, &delta, 1e-10, 50)?;
    println!(
        "f = 1, bracket [0, t]: converged = {}, max w = {:.6}, below-bracket excess = {:.1e}",
        report.converged,
        report.solution.norm(),
        bracket_excess(&report, |_| 0.0),
    );

    // The p-Laplacian configuration with a negative right slope.
    let alpha = 1.5;
    let lambda = 0.0;
    let params = ProblemParams::new(alpha, lambda).with_boundary(0.0, -alpha / 2.0);
    let f = expr::builtin("example3", &[2.0, lambda, alpha])?;
    println!("\nf(t,u) = {f},  A = 0, B = {}", -alpha / 2.0);

    let gamma = WGridFunction::from_weighted_fn(chebyshev_points(513), alpha, |t| -t * t);
    let delta = WGridFunction::constant(0.0, alpha);
    let lower = check_lower_upper(&gamma, &params, &f.as_fn(), CandidateKind::Lower)?;
    let upper = check_lower_upper(&delta, &params, &f.as_fn(), CandidateKind::Upper)?;
    println!(
        "candidate inequalities: lower passed = {} (worst {:.3e}), upper passed = {} (worst {:.3e})",
        lower.passed, lower.interior_worst, upper.passed, upper.interior_worst
    );

    let report = monotone_solve(&params, &f.as_fn(), &gamma, &delta, 1e-9, 200)?;
    println!(
        "iteration: converged = {}, residuals: fixed point {:.1e}, equation {:.1e}",
        report.converged, report.residual_fp, report.residual_ode
    );
    println!(
        "solution stays below 0 (upper bound holds), but drops under the lower candidate by {:.3}",
        bracket_excess(&report, |t| -t * t),
    );
    println!("w(1) = {:.6} versus the candidate's -1", report.solution.w_values().last().unwrap());
    Ok(())
}
