//! Real-valued functions of one real variable `t`.
//!
//! The grammar is deliberately small: literals, `t`, `+ - * /`, unary minus,
//! parentheses and a power with a constant exponent.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' '-'? number)?
//! atom   := number | 't' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-t^2` is `-(t^2)`.

use std::fmt;
use std::ops;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
}

/// Anything that can be evaluated as a real function of `t`.
///
/// Implemented for [`Expr`] and for plain closures `Fn(f64) -> f64`; a
/// closure returning a non-finite value reports a domain error.
pub trait RealFn {
    fn eval_at(&self, t: f64) -> Result<f64>;
}

impl RealFn for Expr {
    fn eval_at(&self, t: f64) -> Result<f64> {
        self.eval(t)
    }
}

impl<F> RealFn for F
where
    F: Fn(f64) -> f64,
{
    fn eval_at(&self, t: f64) -> Result<f64> {
        let v = self(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("function value {v} at t = {t}")))
        }
    }
}

impl Expr {
    pub fn num(x: f64) -> Self {
        Expr::Num(x)
    }

    pub fn t() -> Self {
        Expr::Var
    }

    pub fn pow(self, exponent: f64) -> Self {
        Expr::Pow(Box::new(self), exponent)
    }

    pub fn parse(src: &str) -> Result<Self> {
        Parser::new(src).parse()
    }

    /// Evaluate at `t`. Integer exponents of negative bases go through
    /// repeated multiplication; non-integer exponents of negative bases and
    /// division by zero are domain errors.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Var => t,
            Expr::Neg(e) => -e.eval(t)?,
            Expr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Expr::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Expr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Expr::Div(a, b) => {
                let d = b.eval(t)?;
                if d == 0.0 {
                    return Err(Error::Domain(format!("division by zero at t = {t}")));
                }
                a.eval(t)? / d
            }
            Expr::Pow(base, e) => {
                let x = base.eval(t)?;
                if x == 0.0 && *e < 0.0 {
                    return Err(Error::Domain(format!("0 raised to {e} at t = {t}")));
                }
                if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
                    x.powi(*e as i32)
                } else if x < 0.0 {
                    return Err(Error::Domain(format!(
                        "negative base {x} to non-integer exponent {e} at t = {t}"
                    )));
                } else {
                    x.powf(*e)
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("non-finite value at t = {t}")))
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Num(x) if x.is_sign_negative() => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::Var => 5,
        }
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

struct Wrapped<'a>(&'a Expr, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Prints with minimal parentheses. Trees produced by the parser reparse to
/// an identical tree; a negative literal built by hand prints as `-x` and
/// reparses as a negation.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Var => f.write_str("t"),
            Expr::Neg(e) => write!(f, "-{}", Wrapped(e, 3)),
            Expr::Add(a, b) => write!(f, "{} + {}", Wrapped(a, 1), Wrapped(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", Wrapped(a, 1), Wrapped(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", Wrapped(a, 2), Wrapped(b, 3)),
            Expr::Div(a, b) => write!(f, "{}/{}", Wrapped(a, 2), Wrapped(b, 3)),
            Expr::Pow(b, e) => write!(f, "{}^{e}", Wrapped(b, 5)),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<Expr> {
        let e = self.expr()?;
        match self.peek() {
            None => Ok(e),
            Some(c) => Err(self.error(format!("expected operator or end of input, found {c:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs + self.term()?;
            } else if self.eat('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs * self.unary()?;
            } else if self.eat('/') {
                lhs = lhs / self.unary()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        self.skip_ws();
        let e = self
            .number()?
            .ok_or_else(|| self.error("expected numeric exponent after '^'"))?;
        Ok(base.pow(if negative { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                Ok(Expr::Var)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let x = self
                    .number()?
                    .ok_or_else(|| self.error("expected number"))?;
                Ok(Expr::Num(x))
            }
            Some(c) => Err(self.error(format!("expected number, 't' or '(', found {c:?}"))),
            None => Err(self.error("expected number, 't' or '(', found end of input")),
        }
    }

    /// Unsigned decimal literal with optional fraction and exponent.
    fn number(&mut self) -> Result<Option<f64>> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut i = start;
        let digits = |i: &mut usize| {
            let from = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - from
        };
        let mut n = digits(&mut i);
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            n += digits(&mut i);
        }
        if n == 0 {
            return Ok(None);
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) > 0 {
                i = j;
            }
        }
        let text = &self.src[start..i];
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => {
                self.pos = i;
                Ok(Some(x))
            }
            _ => Err(self.error(format!("invalid number {text:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("t^2"), Expr::t().pow(2.0));
        assert_eq!(p("(t-3)^2"), (Expr::t() - Expr::num(3.0)).pow(2.0));
        assert_eq!(p("1/t"), Expr::num(1.0) / Expr::t());
    }

    #[test]
    fn precedence() {
        assert_eq!(p("-t^2"), -(Expr::t().pow(2.0)));
        assert_eq!(p("1 + 2*t"), Expr::num(1.0) + Expr::num(2.0) * Expr::t());
        assert_eq!(
            p("t - 1 - 2"),
            (Expr::t() - Expr::num(1.0)) - Expr::num(2.0)
        );
        assert_eq!(p("t^-1"), Expr::t().pow(-1.0));
        assert_eq!(p(" 2 * - t "), Expr::num(2.0) * -Expr::t());
        assert_eq!(p("1.5e1"), Expr::num(15.0));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("t^2").eval(-1.0).unwrap(), 1.0);
        assert_eq!(p("1/t").eval(2.0).unwrap(), 0.5);
        assert!(matches!(p("1/t").eval(0.0), Err(Error::Domain(_))));
        assert_eq!(p("(t-3)^2").eval(2.0).unwrap(), 1.0);
        assert_eq!(p("(-2)^3").eval(0.0).unwrap(), -8.0);
        assert!(matches!(p("t^0.5").eval(-4.0), Err(Error::Domain(_))));
        assert!(matches!(p("t^-1").eval(0.0), Err(Error::Domain(_))));
        assert_eq!(p("t^0.5").eval(4.0).unwrap(), 2.0);
        assert_eq!(p("-t^2").eval(3.0).unwrap(), -9.0);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!(
            Expr::parse("t +"),
            Err(Error::Parse {
                offset: 3,
                message: "expected number, 't' or '(', found end of input".into()
            })
        );
        assert!(matches!(
            Expr::parse("(t"),
            Err(Error::Parse { offset: 2, .. })
        ));
        assert!(matches!(
            Expr::parse("t^t"),
            Err(Error::Parse { offset: 2, .. })
        ));
        assert!(matches!(
            Expr::parse("t t"),
            Err(Error::Parse { offset: 2, .. })
        ));
        assert!(matches!(
            Expr::parse("sin(t)"),
            Err(Error::Parse { offset: 0, .. })
        ));
        assert!(matches!(
            Expr::parse(""),
            Err(Error::Parse { offset: 0, .. })
        ));
    }

    #[test]
    fn closures_are_real_functions() {
        let f = |t: f64| t * t;
        assert_eq!(f.eval_at(3.0).unwrap(), 9.0);
        let g = |t: f64| 1.0 / t;
        assert!(g.eval_at(0.0).is_err());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Var),
            (0.0..1e3f64).prop_map(Expr::Num),
            (0u32..100).prop_map(|n| Expr::Num(n as f64)),
        ];
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| -e),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
                (inner, -4.0..4.0f64).prop_map(|(a, e)| a.pow(e)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(Expr::parse(&printed).unwrap(), e, "printed as {}", printed);
        }

        #[test]
        fn eval_is_deterministic(e in arb_expr(), t in -10.0..10.0f64) {
            let a = e.eval(t);
            let b = e.eval(t);
            match (a, b) {
                (Ok(x), Ok(y)) => prop_assert_eq!(x.to_bits(), y.to_bits()),
                (Err(x), Err(y)) => prop_assert_eq!(x, y),
                _ => prop_assert!(false),
            }
        }
    }
}
