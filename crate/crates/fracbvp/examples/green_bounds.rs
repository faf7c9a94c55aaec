//! The weighted bound pair (m(t), M) of the Green's function.
//!
//! For λ > λ₁* the ratio H(t,s) = t^{2−α}(1−s)^{2−α}G(t,s)/s extends
//! continuously to the whole square and satisfies m(t) ≤ H̃(t,s) ≤ M.
//! These bounds drive the cone arguments and the contraction certificate
//! q = K·M/(α(α−1)) of the solver.
//!
//! Run with `cargo run --example green_bounds`.

use fracbvp::greens::{bounds_envelope, GreenKernel, ProblemParams};
use fracbvp::rng::SplitMix;

fn main() -> fracbvp::Result<()> {
    let params = ProblemParams::new(1.5, -0.5);
    let env = bounds_envelope(&params, 257, 0.25)?;
    println!(
        "alpha = {}, lambda = {}: M = {:.8}, m0 = min m over [{}, 1] = {:.8}",
        env.alpha, env.lambda, env.big_m, env.c1, env.m0
    );
    println!("\n  t      m(t)");
    for k in 0..=10 {
        let i = k * (env.t_grid.len() - 1) / 10;
        println!("  {:4.2}   {:.8}", env.t_grid[i], env.m_grid[i]);
    }

    // Spot-check the sandwich at random off-grid points.
    let kernel = GreenKernel::new(&params)?;
    let mut rng = SplitMix::new(1);
    let mut worst_low = f64::INFINITY;
    let mut worst_high = f64::NEG_INFINITY;
    for _ in 0..100_000 {
        let (t, s) = (rng.uniform(), rng.uniform());
        let h = kernel.h_tilde(t, s)?;
        worst_low = worst_low.min(h - env.m_at(t));
        worst_high = worst_high.max(h - env.big_m);
    }
    println!(
        "\n100000 random samples: min (H - m) = {worst_low:.3e}, max (H - M) = {worst_high:.3e}"
    );
    println!("(both within the interpolation allowance {:.1e})", env.allowance());
    Ok(())
}
