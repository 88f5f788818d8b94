//! The order-α derivative at scattered and dense points.

use ts_fracderiv::{deriv, DerivConfig, Expr, Result, TimeScale};

fn show(f: &str, scale: &str, t: f64, alpha: f64) -> Result<()> {
    let e = Expr::parse(f)?;
    let s: TimeScale = scale.parse()?;
    match deriv(&e, &s, t, alpha, &DerivConfig::default()) {
        Ok(r) => println!(
            "{f:<8} on {scale:<10} t={t:<4} α={alpha:<4} → {:.12}  ({}, {} probes)",
            r.value,
            r.method.as_str(),
            r.diagnostics.probes_used
        ),
        Err(e) => println!("{f:<8} on {scale:<10} t={t:<4} α={alpha:<4} → error: {e}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    // on ℤ the derivative of t² is σ(t)^α + t^α
    show("t^2", "Z", 3.0, 0.5)?;
    // negative values leave the reals
    show("t^2", "Z", -1.0, 0.5)?;
    show("1/t", "Z", -2.0, 0.5)?;
    show("(t-3)^2", "hZ:1", 2.0, 0.5)?;
    // dense points: a limit estimated from both sides
    show("t^2", "R", 4.0, 0.5)?;
    show("t^3", "R", 2.0, 0.25)?;
    // one-sided limit at the left end of an interval
    show("t", "[0,1]u{2}", 0.0, 0.5)?;
    // |t| has a corner at 0
    show("(t^2)^0.5", "R", 0.0, 1.0)?;
    show("t", "{0,1,4}", 4.0, 0.5)?;
    Ok(())
}
