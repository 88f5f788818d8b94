//! Parsing, printing and evaluating function expressions.

use ts_fracderiv::{Expr, Result};

fn main() -> Result<()> {
    for text in ["(t-3)^2", "-t^2", "1/t + 2*t", "t^-1", "t^0.5 * 2"] {
        let e = Expr::parse(text)?;
        println!("{text:<12} parsed as {e:<16} f(2) = {}", e.eval(2.0)?);
    }

    // expressions can also be built with operators
    let f = Expr::num(3.0) * Expr::t().pow(2.0) - Expr::t();
    println!("{f} at t=4: {}", f.eval(4.0)?);

    for bad in ["t^", "(t", "2 $ t"] {
        if let Err(e) = Expr::parse(bad) {
            println!("{bad:?}: {e}");
        }
    }
    match Expr::parse("(-t)^0.5")?.eval(1.0) {
        Ok(v) => println!("{v}"),
        Err(e) => println!("(-t)^0.5 at 1: {e}"),
    }
    Ok(())
}
