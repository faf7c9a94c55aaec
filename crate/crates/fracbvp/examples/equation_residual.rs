//! Independent verification of candidates through the discrete
//! Riemann-Liouville operators: the singular split, the kernel powers, the
//! power rule, and the equation residual of a computed solution.
//!
//! Run with `cargo run --example equation_residual`.

use fracbvp::fracoracle::{ode_residual, rl_integral, RLScheme, SchemeKind};
use fracbvp::greens::ProblemParams;
use fracbvp::grid::{chebyshev_points, WGridFunction};
use fracbvp::mlf::gamma;
use fracbvp::solver::solve_linear;

fn main() -> fracbvp::Result<()> {
    let alpha = 1.5;

    // D^alpha annihilates t^{alpha-1} and t^{alpha-2} exactly after the
    // singular split (w-level: t and 1).
    for (label, w) in [("t^(a-1)", Box::new(|t: f64| t) as Box<dyn Fn(f64) -> f64>),
                       ("t^(a-2)", Box::new(|_: f64| 1.0))] {
        let cand = WGridFunction::from_weighted_fn(chebyshev_points(513), alpha, w);
        let scheme = RLScheme::for_candidate(&cand, 1024, SchemeKind::L1)?;
        println!("D^a {label} at t=0.5: {:+.3e}", scheme.rl_derivative(0.5)?);
    }

    // Power rule: D^alpha t^alpha = Gamma(alpha+1).
    let cand = WGridFunction::from_weighted_fn(chebyshev_points(513), alpha, |t| t * t);
    let scheme = RLScheme::for_candidate(&cand, 2048, SchemeKind::L1)?;
    println!(
        "D^a t^a at t=0.5: {:.6} (exact {:.6})",
        scheme.rl_derivative(0.5)?,
        gamma(alpha + 1.0)
    );

    // Integral power rule: I^0.7 applied to 1 gives t^0.7/Gamma(1.7).
    let n = 2048;
    let h = 1.0 / n as f64;
    let ones = vec![1.0; n + 1];
    println!(
        "I^0.7 1 at t=1: {:.12} (exact {:.12})",
        rl_integral(&ones, h, 0.7, n)?,
        1.0 / gamma(1.7)
    );

    // Residual of a solution produced by the Green's-function route.
    let params = ProblemParams::new(alpha, -0.3);
    let y = |s: f64| (1.0 + s).sqrt();
    let sol = solve_linear(&params, &y)?;
    let report = ode_residual(&sol, &params, &|t, _| y(t))?;
    println!(
        "\nsolve_linear residual through the independent discretization:\n  max interior = {:.3e} at t = {:.3}, boundary residuals {:.1e} / {:.1e}",
        report.max_interior, report.argmax, report.boundary_left, report.boundary_right
    );
    Ok(())
}
