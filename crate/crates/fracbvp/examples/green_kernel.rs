//! The Green's function of the mixed problem and its sign threshold.
//!
//! G(t,s) is positive on (0,1)² exactly when the spectral parameter lies
//! above the principal eigenvalue λ₁*; below it, negative values appear in
//! the triangle t < s. This example prints a small slice of the kernel on
//! both sides of the threshold.
//!
//! Run with `cargo run --example green_kernel`.

use fracbvp::greens::{positivity_report, GreenKernel, ProblemParams};
use fracbvp::spectrum::principal_mixed_eigenvalue;

fn main() -> fracbvp::Result<()> {
    let alpha = 1.7;
    let star = principal_mixed_eigenvalue(alpha)?.value;
    println!("alpha = {alpha}, lambda1* = {star:.6}\n");

    for offset in [0.1, -0.5] {
        let lambda = star + offset;
        let params = ProblemParams::new(alpha, lambda);
        let kernel = GreenKernel::new(&params)?;
        println!("lambda = {lambda:.5} ({}):", if offset > 0.0 { "above" } else { "below" });
        print!("  t\\s ");
        for j in 1..=5 {
            print!("  s={:.2}   ", j as f64 / 6.0);
        }
        println!();
        for i in 1..=5 {
            let t = i as f64 / 6.0;
            print!("  {t:.2}");
            for j in 1..=5 {
                let s = j as f64 / 6.0;
                print!(" {:+9.5}", kernel.eval(t, s)?);
            }
            println!();
        }
        let report = positivity_report(&params, 129)?;
        println!(
            "  scan: all_positive = {}, min = {:.4e} at (t,s) = ({:.3}, {:.3})\n",
            report.all_positive, report.min_value, report.argmin.0, report.argmin.1
        );
    }
    Ok(())
}
