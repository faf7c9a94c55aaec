//! Reproduce the table of first eigenvalues of the mixed problem: the
//! largest negative zero of E_(alpha,alpha-1) for alpha = 1.1, ..., 2.0.
//!
//! Run with `cargo run --example eigenvalue_table`.

use fracbvp::spectrum::principal_mixed_eigenvalue;

fn main() -> fracbvp::Result<()> {
    println!("alpha   lambda1*        bracket width   residual     iterations");
    for k in 1..=10 {
        let alpha = 1.0 + k as f64 / 10.0;
        let r = principal_mixed_eigenvalue(alpha)?;
        println!(
            "{alpha:<7.1}{:<16.6}{:<16.2e}{:<13.2e}{}",
            r.value,
            r.bracket.1 - r.bracket.0,
            r.residual,
            r.iterations
        );
    }
    println!("\nAt alpha = 2 the value is the classical -pi^2/4 = -2.467401...");
    Ok(())
}
