//! Product, quotient, reciprocal and power rules checked against direct
//! evaluation, and the failure of the sum rule.

use ts_fracderiv::{check_rule, power_rule, DerivConfig, Expr, Result, RuleCheck, TimeScale};

fn main() -> Result<()> {
    let cfg = DerivConfig::default();
    let z = TimeScale::integers();
    let e = |s: &str| Expr::parse(s);
    let points: Vec<f64> = (-5..=5).map(f64::from).collect();

    let checks = [
        ("product t·(t+1)", RuleCheck::product(e("t")?, e("t+1")?)),
        ("quotient t²/t", RuleCheck::quotient(e("t^2")?, e("t")?)),
        ("reciprocal 1/t", RuleCheck::reciprocal(e("t")?)),
        (
            "constant 2·t²",
            RuleCheck::constant_multiple(e("t^2")?, 2.0),
        ),
        ("power t⁴", RuleCheck::power(4)),
        ("increment t³", RuleCheck::increment(e("t^3")?)),
        (
            "sum t + 2t",
            RuleCheck::sum_counterexample(e("t")?, e("2*t")?),
        ),
    ];
    for (name, check) in checks {
        let report = check_rule(&check, &z, &points, 0.5, &cfg)?;
        println!(
            "{name:<18} {:>2} points, {:>2} skipped, max residual {:.3e}",
            report.points.len(),
            report.domain_skips,
            report.max_residual
        );
    }

    println!("power rule m=3 at 2: {}", power_rule(&z, 2.0, 0.5, 3)?);
    Ok(())
}
