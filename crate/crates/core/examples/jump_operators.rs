//! Jump operators and point classification on a few time scales.

use ts_fracderiv::{Result, TimeScale};

fn main() -> Result<()> {
    let scales = ["Z", "hZ:0.5", "qZ:2", "{0,1,4}", "[0,1]u{2}u[3,4]"];
    for spec in scales {
        let scale: TimeScale = spec.parse()?;
        println!("{scale}");
        let points = match scale.kind() {
            ts_fracderiv::ScaleKind::QScale { .. } => vec![0.0, 1.0, 4.0],
            _ => scale
                .points_in(0.0, 4.0, Some(0.5))?
                .into_iter()
                .take(6)
                .collect(),
        };
        for t in points {
            println!(
                "  t={t:<4} σ={:<4} ρ={:<4} μ={:<4} {}  in T^κ: {}",
                scale.sigma(t)?,
                scale.rho(t)?,
                scale.graininess(t)?,
                scale.classify(t)?,
                scale.in_kappa(t)?,
            );
        }
    }
    Ok(())
}
