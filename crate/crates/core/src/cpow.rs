//! Principal-branch powers with real exponents.
//!
//! `x^α` for a negative real base is `|x|^α·e^{iαπ}`, so fractional powers of
//! negative function values are complex. The angle is evaluated with exact
//! values at multiples of π/2, which keeps `(-1)^{1/2}` exactly `i` and
//! `x^1` exactly `x`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Complex value of double precision; the codomain of the fractional
/// derivative.
pub type CValue = Complex64;

/// Serialize a [`CValue`] as `{"re": .., "im": ..}`.
pub fn serialize_re_im<S: Serializer>(z: &CValue, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }
    ReIm { re: z.re, im: z.im }.serialize(s)
}

/// `(cos πa, sin πa)` with exact results when `2a` is an integer.
fn cos_sin_pi(a: f64) -> (f64, f64) {
    let r = a.rem_euclid(2.0);
    if r == 0.0 {
        (1.0, 0.0)
    } else if r == 0.5 {
        (0.0, 1.0)
    } else if r == 1.0 {
        (-1.0, 0.0)
    } else if r == 1.5 {
        (0.0, -1.0)
    } else {
        let (s, c) = (PI * r).sin_cos();
        (c, s)
    }
}

fn check(z: CValue, alpha: f64) -> Result<CValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!(
            "power with exponent {alpha} overflowed"
        )))
    }
}

/// `x^α` on the principal branch, `Arg x ∈ (−π, π]`.
///
/// `0^α = 0` for `α > 0`; `0^α` with `α ≤ 0` is [`Error::PowUndefined`].
pub fn cpow(x: f64, alpha: f64) -> Result<CValue> {
    if !x.is_finite() || !alpha.is_finite() {
        return Err(Error::Domain(format!("non-finite power input {x}^{alpha}")));
    }
    if x == 0.0 {
        return if alpha > 0.0 {
            Ok(CValue::new(0.0, 0.0))
        } else {
            Err(Error::PowUndefined { alpha })
        };
    }
    if x > 0.0 {
        return check(CValue::new(x.powf(alpha), 0.0), alpha);
    }
    let m = (-x).powf(alpha);
    let (c, s) = cos_sin_pi(alpha);
    check(CValue::new(m * c, m * s), alpha)
}

/// `z^α = exp(α·Log z)` with the principal logarithm.
///
/// Integer exponents use repeated multiplication; real `z` (including a
/// negative zero imaginary part) goes through [`cpow`] so the negative axis
/// always has argument +π.
pub fn cpow_c(z: CValue, alpha: f64) -> Result<CValue> {
    if !alpha.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite power input ({z})^{alpha}"
        )));
    }
    if z.im == 0.0 {
        return cpow(z.re, alpha);
    }
    if alpha.fract() == 0.0 && alpha.abs() <= i32::MAX as f64 {
        return check(z.powi(alpha as i32), alpha);
    }
    let r = z.norm();
    let theta = z.im.atan2(z.re);
    let (s, c) = (alpha * theta).sin_cos();
    let m = r.powf(alpha);
    check(CValue::new(m * c, m * s), alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: CValue, b: CValue, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn real_base_examples() {
        assert_eq!(cpow(4.0, 0.5).unwrap(), CValue::new(2.0, 0.0));
        assert_eq!(cpow(0.0, 0.5).unwrap(), CValue::new(0.0, 0.0));
        // exp(0.5·iπ)
        let oracle = CValue::new(0.0, 0.5 * PI).exp();
        let got = cpow(-1.0, 0.5).unwrap();
        assert!(close(got, oracle, 1e-15));
        assert!(close(got, CValue::i(), 1e-15));
        // 2·exp(iπ/3), not the real cube root −2
        let oracle = 2.0 * CValue::new(0.0, PI / 3.0).exp();
        let got = cpow(-8.0, 1.0 / 3.0).unwrap();
        assert!(close(got, oracle, 1e-14));
        assert!(close(got, CValue::new(1.0, 3f64.sqrt()), 1e-14));
    }

    #[test]
    fn zero_base_with_nonpositive_exponent() {
        assert_eq!(cpow(0.0, 0.0), Err(Error::PowUndefined { alpha: 0.0 }));
        assert_eq!(cpow(0.0, -0.5), Err(Error::PowUndefined { alpha: -0.5 }));
        assert_eq!(
            cpow_c(CValue::new(0.0, 0.0), -1.0),
            Err(Error::PowUndefined { alpha: -1.0 })
        );
    }

    #[test]
    fn complex_base_examples() {
        assert_eq!(cpow_c(CValue::i(), 2.0).unwrap(), CValue::new(-1.0, 0.0));
        assert!(close(
            cpow_c(CValue::new(-1.0, 0.0), 0.5).unwrap(),
            CValue::i(),
            1e-15
        ));
        assert_eq!(
            cpow_c(CValue::new(4.0, 0.0), 0.5).unwrap(),
            CValue::new(2.0, 0.0)
        );
        // negative zero imaginary part still sits on the principal ray Arg = π
        assert!(close(
            cpow_c(CValue::new(-1.0, -0.0), 0.5).unwrap(),
            CValue::i(),
            1e-15
        ));
        // i^0.5 = e^{iπ/4}
        let got = cpow_c(CValue::i(), 0.5).unwrap();
        assert!(close(got, CValue::new(0.5f64.sqrt(), 0.5f64.sqrt()), 1e-15));
    }

    #[test]
    fn branch_caution() {
        assert_eq!(cpow(1.0, 0.5).unwrap(), CValue::new(1.0, 0.0));
        let r = cpow(-1.0, 0.5).unwrap();
        assert!(close(r * r, CValue::new(-1.0, 0.0), 1e-15));
    }

    fn nonzero() -> impl Strategy<Value = f64> {
        prop_oneof![-1e3..-1e-3f64, 1e-3..1e3f64]
    }

    proptest! {
        #[test]
        fn positive_base_is_real_power(x in 1e-6..1e6f64, a in -3.0..3.0f64) {
            let z = cpow(x, a).unwrap();
            let r = x.powf(a);
            prop_assert_eq!(z.im, 0.0);
            prop_assert!((z.re - r).abs() <= 1e-14 * r.abs());
        }

        #[test]
        fn unit_exponent_is_identity(x in nonzero()) {
            let z = cpow(x, 1.0).unwrap();
            prop_assert!((z.re - x).abs() <= 1e-15 * x.abs());
            prop_assert!(z.im.abs() <= 1e-15 * x.abs());
        }

        #[test]
        fn modulus_is_real_power_of_modulus(x in nonzero(), a in -3.0..3.0f64) {
            let z = cpow(x, a).unwrap();
            let m = x.abs().powf(a);
            prop_assert!((z.norm() - m).abs() <= 1e-13 * m);
        }

        #[test]
        fn exponents_add(x in nonzero(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
            let lhs = cpow(x, a).unwrap() * cpow(x, b).unwrap();
            let rhs = cpow(x, a + b).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-300));
        }

        #[test]
        fn complex_power_agrees_with_exp_log(re in -10.0..10.0f64, im in 1e-3..10.0f64, a in -2.0..2.0f64, flip in any::<bool>()) {
            let z = CValue::new(re, if flip { -im } else { im });
            let oracle = (a * z.ln()).exp();
            let got = cpow_c(z, a).unwrap();
            prop_assert!((got - oracle).norm() <= 1e-12 * oracle.norm().max(1.0));
        }
    }
}
