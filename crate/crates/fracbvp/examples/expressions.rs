//! The expression language for nonlinearities f(t,u) and right-hand sides.
//!
//! Run with `cargo run --example expressions`.

use fracbvp::expr::{builtin, parse, phi_p, print};

fn main() -> fracbvp::Result<()> {
    let sources = [
        "(1+t)*log(2+u)",
        "t*(u+1)/(u+2)",
        "phi_p(2; u) - 0.5*t^1.5",
        "min(t, max(u, 0.25)) + sqrt(abs(u))",
    ];
    for src in sources {
        let ast = parse(src)?;
        println!("{src:40} -> {}", print(&ast));
        println!("{:40}    value at (t,u) = (0.5, 1): {:.6}", "", ast.eval(0.5, 1.0)?);
    }

    println!("\nregistered nonlinearities:");
    for (name, args) in [
        ("example1a", vec![]),
        ("example1b", vec![3.0]),
        ("example2", vec![]),
        ("example3", vec![2.0, -0.25, 1.5]),
    ] {
        println!("  {name:10} -> {}", builtin(name, &args)?);
    }

    println!("\np-Laplacian phi_p(2; x) = x|x|:");
    for x in [-3.0, -0.5, 0.0, 2.0] {
        println!("  phi_2({x:+.1}) = {:+.2}", phi_p(2.0, x));
    }

    match parse("u+") {
        Err(e) => println!("\nparse error reporting: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
