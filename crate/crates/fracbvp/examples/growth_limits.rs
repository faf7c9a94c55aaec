//! Finite-sample growth diagnostics of a nonlinearity: the four limits of
//! f(t,u)/u (min and max over t, as u → 0⁺ and u → ∞) classified from a
//! geometric ladder of u values.
//!
//! Sublinear-at-infinity and superlinear-at-infinity shapes drive the
//! existence theory; the classifier labels them {Zero, Infinite, Finite},
//! falling back to Inconclusive when the trend is unclear.
//!
//! Run with `cargo run --example growth_limits`.

use fracbvp::expr;
use fracbvp::solver::{default_ladder, growth_diagnostics, TWindow};

fn main() -> fracbvp::Result<()> {
    let ladder = default_ladder();
    let cases = [
        ("example1a", vec![]),
        ("example1b", vec![2.0]),
        ("example2", vec![]),
    ];
    for (name, params) in cases {
        let f = expr::builtin(name, &params)?;
        let d = growth_diagnostics(&f.as_fn(), TWindow::Full, &ladder);
        println!("f(t,u) = {f}");
        println!("  min f/u as u->0+ : {:?}", d.at_zero_min.trend);
        println!("  max f/u as u->0+ : {:?}", d.at_zero_max.trend);
        println!("  min f/u as u->inf: {:?}", d.at_inf_min.trend);
        println!("  max f/u as u->inf: {:?}", d.at_inf_max.trend);
        println!();
    }

    // The tail window matters for nonlinearities that vanish at t = 0.
    let f = expr::parse("t*u^2")?;
    let full = growth_diagnostics(&f.as_fn(), TWindow::Full, &ladder);
    let tail = growth_diagnostics(&f.as_fn(), TWindow::Tail(0.25), &ladder);
    println!("f(t,u) = {f}: min f/u as u->inf over [0,1] -> {:?}, over [0.25,1] -> {:?}",
        full.at_inf_min.trend, tail.at_inf_min.trend);
    Ok(())
}
