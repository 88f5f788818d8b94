//! Complex-valued fractional delta derivatives on time scales.
//!
//! For a real function `f` on a time scale `T` and an order `α ∈ (0, 1]`,
//! the fractional delta derivative at a right-scattered point is
//!
//! ```text
//! f^{Δ^α}(t) = (f(σ(t))^α − f(t)^α) / (σ(t)^α − t^α)
//! ```
//!
//! and at a right-dense point the limit of the same quotient with `σ(t)`
//! replaced by `s → t`. Powers are taken on the principal complex branch,
//! so the derivative is complex in general.
//!
//! ```
//! use ts_fracderiv::{deriv, DerivConfig, Expr, TimeScale};
//!
//! let f: Expr = "t^2".parse().unwrap();
//! let r = deriv(&f, &TimeScale::integers(), 3.0, 0.5, &DerivConfig::default()).unwrap();
//! assert!((r.value.re - (3f64.sqrt() + 2.0)).abs() < 1e-12);
//! ```

pub mod cli;
pub mod cpow;
pub mod error;
pub mod expr;
pub mod fracderiv;
pub mod rules;
pub mod timescale;

pub use cpow::{cpow, cpow_c, CValue};
pub use error::{Error, Result};
pub use expr::{Expr, RealFn};
pub use fracderiv::{
    alpha_lift, deriv, deriv_dense, deriv_higher, deriv_scattered, hilger_derivative, DerivConfig,
    DerivResult, Diagnostics, Method, SideProbe,
};

pub use rules::{check_rule, power_rule, Rule, RuleCheck, RulePoint, RuleReport};
pub use timescale::{Direction, Part, PointClass, ScaleKind, TimeScale};
