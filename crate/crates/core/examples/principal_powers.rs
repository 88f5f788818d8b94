//! Real powers of negative and complex numbers on the principal branch.

use ts_fracderiv::{cpow, cpow_c, CValue, Result};

fn main() -> Result<()> {
    for (x, alpha) in [
        (4.0, 0.5),
        (-1.0, 0.5),
        (-8.0, 1.0 / 3.0),
        (-2.0, 0.25),
        (0.0, 0.5),
    ] {
        println!("({x})^{alpha} = {}", cpow(x, alpha)?);
    }
    let z = CValue::new(0.0, 1.0);
    println!("i^0.5 = {}", cpow_c(z, 0.5)?);
    // the power law (xy)^α = x^α y^α fails when both factors are negative
    let (x, y, a) = (-2.0, -3.0, 0.5);
    println!(
        "(xy)^α = {}  vs  x^α y^α = {}",
        cpow(x * y, a)?,
        cpow(x, a)? * cpow(y, a)?
    );
    match cpow(0.0, -1.0) {
        Ok(v) => println!("0^-1 = {v}"),
        Err(e) => println!("0^-1: {e}"),
    }
    Ok(())
}
