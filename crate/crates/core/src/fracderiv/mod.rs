//! The fractional delta derivative `f^{Δ^α}(t)`.
//!
//! The α-lift `f^α(s)` is the pointwise principal-branch power of `f(s)`.
//! At a right-scattered point the derivative is the quotient
//!
//! ```text
//! (f^α(σ(t)) − f^α(t)) / (σ(t)^α − t^α)
//! ```
//!
//! and at a right-dense point it is the limit of
//! `(f^α(t) − f^α(s)) / (t^α − s^α)` as `s → t` within the scale, estimated
//! numerically from every side on which the scale accumulates at `t`.
//! Orders above one go through [`deriv_higher`].

mod higher;
mod limit;

use serde::Serialize;

use crate::cpow::{cpow, serialize_re_im, CValue};
use crate::error::{Error, Result};
use crate::expr::RealFn;
use crate::timescale::{PointClass, TimeScale};

pub use higher::{deriv_higher, hilger_derivative};
pub use limit::SideProbe;

/// Numeric tolerances standing in for the ε/δ neighbourhood machinery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivConfig {
    /// Relative change between consecutive probes accepted as converged.
    pub tol: f64,
    /// Initial probe step; `None` means `1e-2·max(1, |t|)`.
    pub h0: Option<f64>,
    pub max_halvings: u32,
    /// Allowed disagreement between one-sided limits, relative to `1 + |value|`.
    pub agreement_tol: f64,
    /// Denominators `|σ^α − t^α|` below this are rejected.
    pub denom_floor: f64,
}

impl Default for DerivConfig {
    fn default() -> Self {
        DerivConfig {
            tol: 1e-8,
            h0: None,
            max_halvings: 40,
            agreement_tol: 1e-6,
            denom_floor: 1e-300,
        }
    }
}

impl DerivConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64, name: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {x}"
                )))
            }
        };
        positive(self.tol, "tol")?;
        if let Some(h0) = self.h0 {
            positive(h0, "h0")?;
        }
        positive(self.agreement_tol, "agreement_tol")?;
        positive(self.denom_floor, "denom_floor")?;
        if self.max_halvings < 4 {
            return Err(Error::InvalidConfig(format!(
                "max_halvings must be at least 4, got {}",
                self.max_halvings
            )));
        }
        Ok(())
    }

    pub fn initial_step(&self, t: f64) -> f64 {
        self.h0.unwrap_or_else(|| 1e-2 * t.abs().max(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    QuotientFormula,
    NumericLimit,
    HigherOrderComposition,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::QuotientFormula => "QuotientFormula",
            Method::NumericLimit => "NumericLimit",
            Method::HigherOrderComposition => "HigherOrderComposition",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub probes_used: usize,
    pub last_residual: f64,
    pub sides_probed: Vec<SideProbe>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivResult {
    #[serde(serialize_with = "serialize_re_im")]
    pub value: CValue,
    pub classification: PointClass,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

/// `f^α(s)`: the principal-branch power of the function value.
pub fn alpha_lift<F: RealFn + ?Sized>(f: &F, s: f64, alpha: f64) -> Result<CValue> {
    cpow(f.eval_at(s)?, alpha)
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder {
            alpha,
            range: "(0, 1]",
        })
    }
}

fn finite(t: f64, z: CValue) -> Result<CValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite { t })
    }
}

/// Snap `t` and check it lies in T^κ.
fn kappa_point(scale: &TimeScale, t: f64) -> Result<f64> {
    let t = scale.locate(t)?;
    if scale.in_kappa(t)? {
        Ok(t)
    } else {
        Err(Error::NotInKappa { t })
    }
}

/// Quotient formula at a right-scattered point.
pub fn deriv_scattered<F: RealFn + ?Sized>(
    f: &F,
    scale: &TimeScale,
    t: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<DerivResult> {
    check_order(alpha)?;
    cfg.validate()?;
    let t = kappa_point(scale, t)?;
    let sigma = scale.sigma(t)?;
    if sigma <= t {
        return Err(Error::Domain(format!(
            "t = {t} is right-dense, not right-scattered"
        )));
    }
    let denom = cpow(sigma, alpha)? - cpow(t, alpha)?;
    if denom.norm() < cfg.denom_floor {
        return Err(Error::DegenerateDenominator {
            t,
            magnitude: denom.norm(),
        });
    }
    let numer = alpha_lift(f, sigma, alpha)? - alpha_lift(f, t, alpha)?;
    Ok(DerivResult {
        value: finite(t, numer / denom)?,
        classification: scale.classify(t)?,
        method: Method::QuotientFormula,
        diagnostics: Diagnostics {
            probes_used: 0,
            last_residual: 0.0,
            sides_probed: Vec::new(),
        },
    })
}

/// Numerical limit at a right-dense point, probing every side from which
/// the scale accumulates at `t` and requiring the sides to agree.
pub fn deriv_dense<F: RealFn + ?Sized>(
    f: &F,
    scale: &TimeScale,
    t: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<DerivResult> {
    check_order(alpha)?;
    cfg.validate()?;
    let t = kappa_point(scale, t)?;
    if scale.sigma(t)? > t {
        return Err(Error::Domain(format!(
            "t = {t} is right-scattered, not right-dense"
        )));
    }
    let directions = scale.approach_directions(t)?;
    if directions.is_empty() {
        return Err(Error::Domain(format!(
            "no points of the scale accumulate at t = {t}"
        )));
    }
    let lift_t = alpha_lift(f, t, alpha)?;
    let pow_t = cpow(t, alpha)?;
    let mut quotient = |s: f64| -> Result<CValue> {
        let denom = pow_t - cpow(s, alpha)?;
        if denom.norm() < cfg.denom_floor {
            return Err(Error::DegenerateDenominator {
                t,
                magnitude: denom.norm(),
            });
        }
        finite(t, (lift_t - alpha_lift(f, s, alpha)?) / denom)
    };
    let h0 = cfg.initial_step(t);
    let sides = directions
        .into_iter()
        .map(|dir| {
            limit::halving_limit(scale, t, dir, h0, cfg.max_halvings, cfg.tol, &mut quotient)
        })
        .collect::<Result<Vec<_>>>()?;
    let value = limit::combine_sides(t, &sides, cfg.agreement_tol)?;
    Ok(DerivResult {
        value,
        classification: scale.classify(t)?,
        method: Method::NumericLimit,
        diagnostics: Diagnostics {
            probes_used: sides.iter().map(|s| s.probes).sum(),
            last_residual: sides.iter().map(|s| s.residual).fold(0.0, f64::max),
            sides_probed: sides,
        },
    })
}

/// `f^{Δ^α}(t)` for `α ∈ (0, 1]`, dispatching on whether `t` is
/// right-scattered.
pub fn deriv<F: RealFn + ?Sized>(
    f: &F,
    scale: &TimeScale,
    t: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<DerivResult> {
    let t = kappa_point(scale, t)?;
    if scale.sigma(t)? > t {
        deriv_scattered(f, scale, t, alpha, cfg)
    } else {
        deriv_dense(f, scale, t, alpha, cfg)
    }
}
