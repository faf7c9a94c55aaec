//! Solve the linear mixed problem D^α u − λu + y = 0 with prescribed
//! boundary data and verify the answer against the discrete
//! Riemann-Liouville operators.
//!
//! Run with `cargo run --example linear_solve`.

use fracbvp::fracoracle::ode_residual;
use fracbvp::greens::ProblemParams;
use fracbvp::solver::{linear_right_derivative, solve_linear};

fn main() -> fracbvp::Result<()> {
    let params = ProblemParams::new(1.5, -0.3).with_boundary(0.5, -0.25);
    let y = |s: f64| 1.0 + s * s;
    let sol = solve_linear(&params, &y)?;

    println!("alpha = 1.5, lambda = -0.3, weighted left value A = 0.5, right slope B = -0.25");
    println!("\n  t      w(t) = t^(2-a) u(t)    u(t)");
    let us = sol.u_values();
    for k in 0..=8 {
        let i = k * (sol.grid().len() - 1) / 8;
        println!("  {:4.2}   {:+.10}        {:+.10}", sol.grid()[i], sol.w_values()[i], us[i]);
    }

    println!("\nboundary check: w(0) = {} (prescribed 0.5)", sol.w_values()[0]);
    println!(
        "                u'(1) = {:.12} (prescribed -0.25)",
        linear_right_derivative(&params, &y)?
    );

    let residual = ode_residual(&sol, &params, &|t, _| y(t))?;
    println!(
        "\nequation residual (independent discretization): max interior = {:.3e} at t = {:.3}",
        residual.max_interior, residual.argmax
    );
    Ok(())
}
