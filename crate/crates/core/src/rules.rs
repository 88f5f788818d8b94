//! Closed-form calculus rules for the fractional delta derivative, and a
//! driver that checks them against direct evaluation on a set of points.
//!
//! The rules rest on real-power identities such as `(fg)^α = f^α g^α`. On
//! the principal branch these hold only under sign conditions, so every
//! rule carries a validity domain; [`check_rule`] skips points outside it
//! instead of reporting a spurious failure.

use serde::Serialize;

use crate::cpow::{cpow, serialize_re_im, CValue};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fracderiv::{alpha_lift, deriv, DerivConfig};
use crate::timescale::TimeScale;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    ConstantMultiple,
    Product,
    Reciprocal,
    Quotient,
    Power,
    SumCounterexample,
    Increment,
}

impl Rule {
    /// Kebab-case name used on the command line.
    pub fn from_name(name: &str) -> Option<Rule> {
        Some(match name {
            "constant-multiple" => Rule::ConstantMultiple,
            "product" => Rule::Product,
            "reciprocal" => Rule::Reciprocal,
            "quotient" => Rule::Quotient,
            "power" => Rule::Power,
            "sum-counterexample" => Rule::SumCounterexample,
            "increment" => Rule::Increment,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RulePoint {
    pub t: f64,
    #[serde(serialize_with = "serialize_re_im")]
    pub lhs: CValue,
    #[serde(serialize_with = "serialize_re_im")]
    pub rhs: CValue,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleReport {
    pub rule: Rule,
    pub points: Vec<RulePoint>,
    pub max_residual: f64,
    pub domain_skips: usize,
}

/// The functions and constants a rule check needs. Which fields are
/// required depends on the rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleCheck {
    pub rule: Rule,
    pub f: Option<Expr>,
    pub g: Option<Expr>,
    pub lambda: Option<f64>,
    pub m: Option<u32>,
}

impl RuleCheck {
    pub fn constant_multiple(f: Expr, lambda: f64) -> Self {
        RuleCheck {
            rule: Rule::ConstantMultiple,
            f: Some(f),
            g: None,
            lambda: Some(lambda),
            m: None,
        }
    }

    pub fn product(f: Expr, g: Expr) -> Self {
        RuleCheck {
            rule: Rule::Product,
            f: Some(f),
            g: Some(g),
            lambda: None,
            m: None,
        }
    }

    pub fn reciprocal(f: Expr) -> Self {
        RuleCheck {
            rule: Rule::Reciprocal,
            f: Some(f),
            g: None,
            lambda: None,
            m: None,
        }
    }

    pub fn quotient(f: Expr, g: Expr) -> Self {
        RuleCheck {
            rule: Rule::Quotient,
            f: Some(f),
            g: Some(g),
            lambda: None,
            m: None,
        }
    }

    pub fn power(m: u32) -> Self {
        RuleCheck {
            rule: Rule::Power,
            f: None,
            g: None,
            lambda: None,
            m: Some(m),
        }
    }

    pub fn sum_counterexample(f: Expr, g: Expr) -> Self {
        RuleCheck {
            rule: Rule::SumCounterexample,
            f: Some(f),
            g: Some(g),
            lambda: None,
            m: None,
        }
    }

    pub fn increment(f: Expr) -> Self {
        RuleCheck {
            rule: Rule::Increment,
            f: Some(f),
            g: None,
            lambda: None,
            m: None,
        }
    }
}

/// `λ^α · f^{Δ^α}(t)`.
pub fn constant_multiple_rhs(
    f: &Expr,
    lambda: f64,
    scale: &TimeScale,
    t: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<CValue> {
    Ok(cpow(lambda, alpha)? * deriv(f, scale, t, alpha, cfg)?.value)
}

/// The two equivalent right-hand sides of the product rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductRhs {
    /// `f^{Δα}(t) g^α(t) + f^α(σ(t)) g^{Δα}(t)`
    pub sigma_on_f: CValue,
    /// `f^{Δα}(t) g^α(σ(t)) + f^α(t) g^{Δα}(t)`
    pub sigma_on_g: CValue,
}

pub fn product_rhs(
    f: &Expr,
    g: &Expr,
    scale: &TimeScale,
    t: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<ProductRhs> {
    let t = scale.locate(t)?;
    let sigma = scale.sigma(t)?;
    let df = deriv(f, scale, t, alpha, cfg)?.value;
    let dg = deriv(g, scale, t, alpha, cfg)?.value;
    Ok(ProductRhs {
        sigma_on_f: df * alpha_lift(g, t, alpha)? + alpha_lift(f, sigma, alpha)? * dg,
        sigma_on_g: df * alpha_lift(g, sigma, alpha)? + alpha_lift(f, t, alpha)? * dg,
    })
}

fn nonzero_at(f: &Expr, scale: &TimeScale, t: f64) -> Result<(f64, f64)> {
    let t = scale.locate(t)?;
    let sigma = scale.sigma(t)?;
    if f.eval(t)? == 0.0 || f.eval(sigma)? == 0.0 {
        return Err(Error::ZeroAtPoint { t });
    }
    Ok((t, sigma))
}

/// `−f^{Δα}(t) / (f^α(σ(t)) f^α(t))`; requires `f(t) f(σ(t)) ≠ 0`.
pub fn reciprocal_rhs(
    f: &Expr,
    scale: &TimeScale,
    t: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<CValue> {
    let (t, sigma) = nonzero_at(f, scale, t)?;
    let df = deriv(f, scale, t, alpha, cfg)?.value;
    Ok(-df / (alpha_lift(f, sigma, alpha)? * alpha_lift(f, t, alpha)?))
}

/// `(f^{Δα} g^α(t) − f^α(t) g^{Δα}) / (g^α(σ(t)) g^α(t))`; requires
/// `g(t) g(σ(t)) ≠ 0`.
pub fn quotient_rhs(
    f: &Expr,
    g: &Expr,
    scale: &TimeScale,
    t: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<CValue> {
    let (t, sigma) = nonzero_at(g, scale, t)?;
    let df = deriv(f, scale, t, alpha, cfg)?.value;
    let dg = deriv(g, scale, t, alpha, cfg)?.value;
    let g_t = alpha_lift(g, t, alpha)?;
    let numer = df * g_t - alpha_lift(f, t, alpha)? * dg;
    Ok(numer / (alpha_lift(g, sigma, alpha)? * g_t))
}

/// Power rule for `t^m`: `Σ_{k=0}^{m−1} (t^α)^{m−k−1} (σ(t)^α)^k`.
pub fn power_rule(scale: &TimeScale, t: f64, alpha: f64, m: u32) -> Result<CValue> {
    if m == 0 {
        return Err(Error::InvalidConfig("power rule needs m ≥ 1".into()));
    }
    let t = scale.locate(t)?;
    if !scale.in_kappa(t)? {
        return Err(Error::NotInKappa { t });
    }
    let a = cpow(t, alpha)?;
    let b = cpow(scale.sigma(t)?, alpha)?;
    let mut a_pow = CValue::new(1.0, 0.0);
    let mut b_pows = vec![CValue::new(1.0, 0.0); m as usize];
    for k in 1..m as usize {
        b_pows[k] = b_pows[k - 1] * b;
    }
    // accumulate from k = m−1 down so a^{m−k−1} grows by one factor per step
    let mut sum = CValue::new(0.0, 0.0);
    for k in (0..m as usize).rev() {
        sum += a_pow * b_pows[k];
        a_pow *= a;
    }
    Ok(sum)
}

fn require<'a, T>(x: &'a Option<T>, what: &str) -> Result<&'a T> {
    x.as_ref()
        .ok_or_else(|| Error::InvalidConfig(format!("rule needs {what}")))
}

/// Whether the rule's real-power identities survive the principal branch
/// at `t` (and `σ(t)`).
fn in_domain(check: &RuleCheck, t: f64, sigma: f64) -> Result<bool> {
    let at = [t, sigma];
    Ok(match check.rule {
        Rule::ConstantMultiple => *require(&check.lambda, "lambda")? > 0.0,
        Rule::Product => {
            let (f, g) = (require(&check.f, "f")?, require(&check.g, "g")?);
            let mut ok = true;
            for s in at {
                ok &= !(f.eval(s)? < 0.0 && g.eval(s)? < 0.0);
            }
            ok
        }
        Rule::Reciprocal => {
            let f = require(&check.f, "f")?;
            let mut ok = true;
            for s in at {
                ok &= f.eval(s)? > 0.0;
            }
            ok
        }
        Rule::Quotient => {
            let (f, g) = (require(&check.f, "f")?, require(&check.g, "g")?);
            let mut ok = true;
            for s in at {
                let gs = g.eval(s)?;
                ok &= gs != 0.0 && !(gs < 0.0 && f.eval(s)? > 0.0);
            }
            ok
        }
        Rule::Power => t >= 0.0 || *require(&check.m, "m")? == 1,
        Rule::SumCounterexample | Rule::Increment => true,
    })
}

/// Direct derivative of the composite (lhs) and the rule's formula (rhs).
fn sides(
    check: &RuleCheck,
    scale: &TimeScale,
    t: f64,
    sigma: f64,
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<(CValue, CValue)> {
    let direct = |e: Expr| deriv(&e, scale, t, alpha, cfg).map(|r| r.value);
    Ok(match check.rule {
        Rule::ConstantMultiple => {
            let (f, lambda) = (require(&check.f, "f")?, *require(&check.lambda, "lambda")?);
            (
                direct(Expr::num(lambda) * f.clone())?,
                constant_multiple_rhs(f, lambda, scale, t, alpha, cfg)?,
            )
        }
        Rule::Product => {
            let (f, g) = (require(&check.f, "f")?, require(&check.g, "g")?);
            (
                direct(f.clone() * g.clone())?,
                product_rhs(f, g, scale, t, alpha, cfg)?.sigma_on_f,
            )
        }
        Rule::Reciprocal => {
            let f = require(&check.f, "f")?;
            (
                direct(Expr::num(1.0) / f.clone())?,
                reciprocal_rhs(f, scale, t, alpha, cfg)?,
            )
        }
        Rule::Quotient => {
            let (f, g) = (require(&check.f, "f")?, require(&check.g, "g")?);
            (
                direct(f.clone() / g.clone())?,
                quotient_rhs(f, g, scale, t, alpha, cfg)?,
            )
        }
        Rule::Power => {
            let m = *require(&check.m, "m")?;
            (
                direct(Expr::t().pow(m as f64))?,
                power_rule(scale, t, alpha, m)?,
            )
        }
        Rule::SumCounterexample => {
            let (f, g) = (require(&check.f, "f")?, require(&check.g, "g")?);
            (
                direct(f.clone() + g.clone())?,
                direct(f.clone())? + direct(g.clone())?,
            )
        }
        Rule::Increment => {
            let f = require(&check.f, "f")?;
            let gap = cpow(sigma, alpha)? - cpow(t, alpha)?;
            (
                alpha_lift(f, sigma, alpha)?,
                alpha_lift(f, t, alpha)? + gap * direct(f.clone())?,
            )
        }
    })
}

/// Compare lhs (direct derivative of the composite function) with rhs (the
/// rule's formula) at every point.
///
/// Points outside the scale or T^κ, outside the rule's validity domain, or
/// where either side cannot be evaluated count as `domain_skips`. Only a
/// structurally unusable request is an error.
pub fn check_rule(
    check: &RuleCheck,
    scale: &TimeScale,
    points: &[f64],
    alpha: f64,
    cfg: &DerivConfig,
) -> Result<RuleReport> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    match check.rule {
        Rule::Power => {
            require(&check.m, "m")?;
        }
        Rule::Product | Rule::Quotient | Rule::SumCounterexample => {
            require(&check.f, "f")?;
            require(&check.g, "g")?;
        }
        Rule::ConstantMultiple => {
            require(&check.f, "f")?;
            require(&check.lambda, "lambda")?;
        }
        Rule::Reciprocal | Rule::Increment => {
            require(&check.f, "f")?;
        }
    }
    let mut report = RuleReport {
        rule: check.rule,
        points: Vec::new(),
        max_residual: 0.0,
        domain_skips: 0,
    };
    for &p in points {
        let evaluated = (|| -> Result<Option<RulePoint>> {
            let t = scale.locate(p)?;
            if !scale.in_kappa(t)? {
                return Ok(None);
            }
            let sigma = scale.sigma(t)?;
            if !in_domain(check, t, sigma)? {
                return Ok(None);
            }
            let (lhs, rhs) = sides(check, scale, t, sigma, alpha, cfg)?;
            Ok(Some(RulePoint {
                t,
                lhs,
                rhs,
                residual: (lhs - rhs).norm(),
            }))
        })();
        match evaluated {
            Ok(Some(point)) => {
                report.max_residual = report.max_residual.max(point.residual);
                report.points.push(point);
            }
            Ok(None) | Err(_) => report.domain_skips += 1,
        }
    }
    Ok(report)
}
