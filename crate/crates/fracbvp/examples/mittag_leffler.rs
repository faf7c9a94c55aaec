//! Evaluate the two-parameter Mittag-Leffler function and compare it with
//! its elementary special cases.
//!
//! Run with `cargo run --example mittag_leffler`.

use fracbvp::mlf::{ml_deriv, ml_eval, recip_gamma, MLArgs};

fn main() -> fracbvp::Result<()> {
    println!("E_(1,1)(x) versus exp(x):");
    for x in [-2.0, -0.5, 0.0, 1.0, 3.0] {
        let e = ml_eval(MLArgs::new(1.0, 1.0, x))?;
        println!("  x = {x:5.1}:  E = {e:.12e}   exp = {:.12e}", x.exp());
    }

    println!("\nE_(2,1)(-y) versus cos(sqrt(y)):");
    for y in [0.25, 1.0, 4.0, 9.8696044] {
        let e = ml_eval(MLArgs::new(2.0, 1.0, -y))?;
        println!("  y = {y:9.5}:  E = {e:+.12e}   cos = {:+.12e}", y.sqrt().cos());
    }

    println!("\nSecond parameter may be any real number (1/Gamma is entire):");
    for beta in [-0.5, 0.0, 0.3] {
        let e = ml_eval(MLArgs::new(1.5, beta, -1.0))?;
        println!("  E_(1.5,{beta:+.1})(-1) = {e:+.12e}   first term 1/Gamma({beta:+.1}) = {:+.6e}",
            recip_gamma(beta));
    }

    println!("\nDerivative against a central difference at (1.5, 0.5, -1):");
    let d = ml_deriv(MLArgs::new(1.5, 0.5, -1.0))?;
    let h = 1e-6;
    let fd = (ml_eval(MLArgs::new(1.5, 0.5, -1.0 + h))? - ml_eval(MLArgs::new(1.5, 0.5, -1.0 - h))?)
        / (2.0 * h);
    println!("  series: {d:.12e}   difference: {fd:.12e}");
    Ok(())
}
