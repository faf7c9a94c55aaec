//! Emit the eigenvalue-comparison dataset as CSV: for each order the
//! principal mixed eigenvalue λ₁*, the principal Dirichlet eigenvalue λ₁,
//! and the largest subinterval eigenvalue λ̄₁(α, t₀). Every row satisfies
//! λ̄₁ < λ₁* and λ₁ < λ₁* — the orderings behind the positivity proof.
//!
//! Run with `cargo run --example eigenvalue_scan > scan.csv`.

use fracbvp::spectrum::eigen_scan;

fn main() -> fracbvp::Result<()> {
    let alphas: Vec<f64> = (1..=10).map(|k| 1.0 + k as f64 / 10.0).collect();
    let t0s: Vec<f64> = (1..=4).map(|j| j as f64 / 5.0).collect();
    let rows = eigen_scan(&alphas, &t0s)?;
    println!("# alpha,t0,lambda_bar_1,lambda_star_1,lambda_1");
    for r in rows {
        println!(
            "{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            r.alpha,
            r.t0.unwrap(),
            r.lambda_bar_1.unwrap(),
            r.lambda_star_1,
            r.lambda_1
        );
    }
    Ok(())
}
