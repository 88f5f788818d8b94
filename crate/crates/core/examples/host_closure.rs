//! Plain Rust closures work anywhere an expression does.

use ts_fracderiv::{deriv, deriv_higher, DerivConfig, Result, TimeScale};

fn main() -> Result<()> {
    let cfg = DerivConfig::default();
    let q = TimeScale::q_scale(2.0)?;
    let exp = |t: f64| t.exp();
    for t in [1.0, 2.0, 4.0] {
        let r = deriv(&exp, &q, t, 0.5, &cfg)?;
        println!("e^t on 2^ℤ at {t}: {:.12}", r.value);
    }

    let sine = |t: f64| t.sin() + 2.0;
    let r = deriv(&sine, &TimeScale::reals(), 1.0, 1.0, &cfg)?;
    println!(
        "(sin t + 2)' at 1: {:.9}  (cos 1 = {:.9})",
        r.value.re,
        1f64.cos()
    );
    let r = deriv_higher(&sine, &TimeScale::reals(), 1.0, 2.0, &cfg)?;
    println!(
        "(sin t + 2)'' at 1: {:.7}  (-sin 1 = {:.7})",
        r.value.re,
        -1f64.sin()
    );

    // a closure producing NaN is reported instead of propagated
    let log = |t: f64| t.ln();
    if let Err(e) = deriv(&log, &TimeScale::integers(), -2.0, 0.5, &cfg) {
        println!("ln t at -2: {e}");
    }
    Ok(())
}
