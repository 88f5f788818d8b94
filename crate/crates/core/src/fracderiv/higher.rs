//! Orders above one: `f^{Δ^α} = (f^{Δ^N})^{Δ^{α−N}}` with `N < α ≤ N+1`,
//! where `f^{Δ^N}` is the N-fold Hilger derivative.
//!
//! Intermediate Hilger derivatives at dense points are limits of ordinary
//! difference quotients. Their values feed further quotients, so they are
//! estimated by polynomial extrapolation rather than plain halving; plain
//! halving stops at about the tolerance, and that error is amplified by
//! the next stage.

use crate::cpow::{cpow, cpow_c, CValue};
use crate::error::{Error, Result};
use crate::expr::RealFn;
use crate::timescale::TimeScale;

use super::limit::{combine_sides, extrapolated_limit, SideProbe};
use super::{deriv, DerivConfig, DerivResult, Diagnostics, Method};

/// Rows of the extrapolation tableau per side.
const EXTRAPOLATION_ROWS: u32 = 14;

type ComplexFn<'a> = dyn Fn(f64) -> Result<CValue> + 'a;

/// Limit at a dense point from every available side, each side held to
/// `cfg.agreement_tol`.
fn dense_stage(
    scale: &TimeScale,
    t: f64,
    cfg: &DerivConfig,
    quotient: &mut dyn FnMut(f64) -> Result<CValue>,
) -> Result<(CValue, Vec<SideProbe>)> {
    let directions = scale.approach_directions(t)?;
    if directions.is_empty() {
        return Err(Error::HigherOrderUnavailable {
            t,
            reason: "no points of the scale accumulate here".into(),
        });
    }
    let h0 = cfg.initial_step(t);
    let mut sides = Vec::with_capacity(directions.len());
    for dir in directions {
        let side = extrapolated_limit(scale, t, dir, h0, EXTRAPOLATION_ROWS, quotient)?;
        if side.residual > cfg.agreement_tol {
            return Err(Error::LimitNotConverged {
                t,
                probes: side.probes,
                residual: side.residual,
            });
        }
        sides.push(side);
    }
    let value = combine_sides(t, &sides, cfg.agreement_tol)?;
    Ok((value, sides))
}

/// One Hilger derivative of `g` at `t`.
fn delta_once(g: &ComplexFn<'_>, scale: &TimeScale, t: f64, cfg: &DerivConfig) -> Result<CValue> {
    let sigma = scale.sigma(t)?;
    if sigma > t {
        return Ok((g(sigma)? - g(t)?) / (sigma - t));
    }
    let g_t = g(t)?;
    let mut quotient = |s: f64| Ok((g(s)? - g_t) / (s - t));
    dense_stage(scale, t, cfg, &mut quotient).map(|(v, _)| v)
}

fn delta_n(
    g: &ComplexFn<'_>,
    scale: &TimeScale,
    t: f64,
    n: u32,
    cfg: &DerivConfig,
) -> Result<CValue> {
    if n == 0 {
        return g(t);
    }
    let t = scale.locate(t)?;
    if !scale.in_kappa(t)? {
        return Err(Error::HigherOrderUnavailable {
            t,
            reason: "point leaves T^κ while iterating the Hilger derivative".into(),
        });
    }
    let prev = |s: f64| delta_n(g, scale, s, n - 1, cfg);
    delta_once(&prev, scale, t, cfg)
}

/// N-fold Hilger derivative `f^{Δ^N}(t)`. `order = 0` returns `f(t)`.
pub fn hilger_derivative<F: RealFn + ?Sized>(
    f: &F,
    scale: &TimeScale,
    t: f64,
    order: u32,
    cfg: &DerivConfig,
) -> Result<CValue> {
    cfg.validate()?;
    let lifted = |s: f64| f.eval_at(s).map(|v| CValue::new(v, 0.0));
    let t = scale.locate(t)?;
    if order > 0 && !scale.in_kappa(t)? {
        return Err(Error::NotInKappa { t });
    }
    delta_n(&lifted, scale, t, order, cfg)
}

/// `f^{Δ^α}(t)` for any `α > 0`.
///
/// With `N = ⌈α⌉ − 1` the N-fold Hilger derivative `g` is computed
/// numerically, raised to the power `α − N` on the principal branch, and
/// differentiated with the order-`α − N` quotient (or its limit at dense
/// points). For `α ≤ 1` this is [`deriv`].
pub fn deriv_higher<F: RealFn + ?Sized>(
    f: &F,
    scale: &TimeScale,
    t: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<DerivResult> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidOrder {
            alpha,
            range: "(0, ∞)",
        });
    }
    cfg.validate()?;
    let n = alpha.ceil() as u32 - 1;
    let beta = alpha - n as f64;
    if n == 0 {
        let mut r = deriv(f, scale, t, alpha, cfg)?;
        r.method = Method::HigherOrderComposition;
        return Ok(r);
    }

    let t = scale.locate(t)?;
    if !scale.in_kappa(t)? {
        return Err(Error::NotInKappa { t });
    }
    let lifted = |s: f64| f.eval_at(s).map(|v| CValue::new(v, 0.0));
    let g = |s: f64| delta_n(&lifted, scale, s, n, cfg);
    let g_beta = |s: f64| g(s).and_then(|v| cpow_c(v, beta));

    let sigma = scale.sigma(t)?;
    let (value, sides) = if sigma > t {
        let denom = cpow(sigma, beta)? - cpow(t, beta)?;
        if denom.norm() < cfg.denom_floor {
            return Err(Error::DegenerateDenominator {
                t,
                magnitude: denom.norm(),
            });
        }
        ((g_beta(sigma)? - g_beta(t)?) / denom, Vec::new())
    } else {
        let top = g_beta(t)?;
        let pow_t = cpow(t, beta)?;
        let mut quotient = |s: f64| -> Result<CValue> {
            let denom = pow_t - cpow(s, beta)?;
            if denom.norm() < cfg.denom_floor {
                return Err(Error::DegenerateDenominator {
                    t,
                    magnitude: denom.norm(),
                });
            }
            Ok((top - g_beta(s)?) / denom)
        };
        dense_stage(scale, t, cfg, &mut quotient)?
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite { t });
    }
    Ok(DerivResult {
        value,
        classification: scale.classify(t)?,
        method: Method::HigherOrderComposition,
        diagnostics: Diagnostics {
            probes_used: sides.iter().map(|s| s.probes).sum(),
            last_residual: sides.iter().map(|s| s.residual).fold(0.0, f64::max),
            sides_probed: sides,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    fn e(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    fn cfg() -> DerivConfig {
        DerivConfig::default()
    }

    #[test]
    fn three_halves_of_cube_on_reals() {
        // f' = 3t², and (3t²)^{Δ^{1/2}} at dense t is lim √3(t − s)/(√t − √s) = 2√(3t)
        let oracle = 2.0 * (3.0f64 * 3.0).sqrt();
        let r = deriv_higher(&e("t^3"), &TimeScale::reals(), 3.0, 1.5, &cfg()).unwrap();
        assert!(
            (r.value - CValue::new(oracle, 0.0)).norm() < 1e-5,
            "{}",
            r.value
        );
        assert_eq!(r.method, Method::HigherOrderComposition);
    }

    #[test]
    fn integer_orders() {
        let r = deriv_higher(&e("t^2"), &TimeScale::reals(), 5.0, 1.0, &cfg()).unwrap();
        assert!((r.value - CValue::new(10.0, 0.0)).norm() < 1e-6);

        // second forward difference of t² on ℤ
        let f = |t: f64| t * t;
        let oracle = f(6.0) - 2.0 * f(5.0) + f(4.0);
        let r = deriv_higher(&e("t^2"), &TimeScale::integers(), 4.0, 2.0, &cfg()).unwrap();
        assert!((r.value - CValue::new(oracle, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn hilger_derivatives() {
        let z = TimeScale::integers();
        assert_eq!(
            hilger_derivative(&e("t^2"), &z, 3.0, 1, &cfg()).unwrap(),
            CValue::new(7.0, 0.0)
        );
        assert_eq!(
            hilger_derivative(&e("t^3"), &z, 0.0, 3, &cfg()).unwrap(),
            CValue::new(6.0, 0.0)
        );
        let r = hilger_derivative(&e("t^3"), &TimeScale::reals(), 2.0, 2, &cfg()).unwrap();
        assert!((r - CValue::new(12.0, 0.0)).norm() < 1e-6, "{r}");
        let q = TimeScale::q_scale(2.0).unwrap();
        // (t²)^Δ = t + σ(t) = 3t on the 2-scale
        assert_eq!(
            hilger_derivative(&e("t^2"), &q, 4.0, 1, &cfg()).unwrap(),
            CValue::new(12.0, 0.0)
        );
    }

    #[test]
    fn leaving_kappa_is_reported() {
        let fin: TimeScale = "{0,1,4}".parse().unwrap();
        assert!(matches!(
            deriv_higher(&e("t^2"), &fin, 1.0, 1.5, &cfg()),
            Err(Error::HigherOrderUnavailable { .. })
        ));
        assert_eq!(
            deriv_higher(&e("t^2"), &fin, 4.0, 1.5, &cfg()),
            Err(Error::NotInKappa { t: 4.0 })
        );
        assert!(matches!(
            deriv_higher(&e("t"), &fin, 0.0, -1.0, &cfg()),
            Err(Error::InvalidOrder { .. })
        ));
    }

    #[test]
    fn mixed_scale_higher_order() {
        // on [0,1] ∪ {2}, σ(1) = 2 and the Hilger derivative at 2 is undefined
        let s: TimeScale = "[0,1]u{2}".parse().unwrap();
        assert!(matches!(
            deriv_higher(&e("t^2"), &s, 1.0, 2.0, &cfg()),
            Err(Error::HigherOrderUnavailable { .. })
        ));
        // interior point: ordinary second derivative
        let r = deriv_higher(&e("t^3"), &s, 0.5, 2.0, &cfg()).unwrap();
        assert!(
            (r.value - CValue::new(3.0, 0.0)).norm() < 1e-6,
            "{}",
            r.value
        );
    }
}
