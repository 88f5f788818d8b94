//! Orders above one: repeated Hilger derivatives followed by a fractional step.

use ts_fracderiv::{deriv_higher, hilger_derivative, DerivConfig, Expr, Result, TimeScale};

fn main() -> Result<()> {
    let cfg = DerivConfig::default();
    let cube = Expr::parse("t^3")?;
    let reals = TimeScale::reals();
    let ints = TimeScale::integers();

    println!(
        "(t³)'' at 2 on ℝ: {:.9}",
        hilger_derivative(&cube, &reals, 2.0, 2, &cfg)?
    );
    println!(
        "Δ³(t³) at 0 on ℤ: {}",
        hilger_derivative(&cube, &ints, 0.0, 3, &cfg)?
    );

    for alpha in [0.5, 1.0, 1.5, 2.0, 2.5] {
        let r = deriv_higher(&cube, &reals, 3.0, alpha, &cfg)?;
        println!("order {alpha} of t³ at 3 on ℝ: {:.8}", r.value);
    }
    for alpha in [1.5, 2.0] {
        let r = deriv_higher(&Expr::parse("t^2")?, &ints, 4.0, alpha, &cfg)?;
        println!("order {alpha} of t² at 4 on ℤ: {:.12}", r.value);
    }
    Ok(())
}
