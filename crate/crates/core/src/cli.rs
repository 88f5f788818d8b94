//! The `tsfrac` command line: `deriv`, `table` and `check`.
//!
//! [`run`] does all the work and hands back the exit code and both output
//! streams, so the binary is a shim and tests need no subprocess.
//!
//! Exit codes: 0 success, 1 a rule check that did not pass, 2 input error
//! (bad flags, scale or expression text, point outside the scale or T^κ),
//! 3 numeric error.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fracderiv::{deriv, deriv_higher, DerivConfig, DerivResult};
use crate::rules::{check_rule, Rule, RuleCheck};
use crate::timescale::TimeScale;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tsfrac",
    version,
    about = "Fractional delta derivatives on time scales"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the derivative at one point and print a JSON record.
    Deriv(DerivArgs),
    /// Evaluate the derivative over a range of points.
    Table(TableArgs),
    /// Compare a calculus rule with direct evaluation.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Time scale, e.g. `Z`, `R`, `hZ:0.5`, `qZ:2`, `{0,1,4}`, `[0,1]u{2}`.
    #[arg(long)]
    pub scale: String,
    /// Function of `t`, e.g. `(t-3)^2`.
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub h0: Option<f64>,
    /// Allow orders above one (N-fold Hilger derivative, then order α − N).
    #[arg(long)]
    pub order_n: bool,
}

#[derive(Debug, Args)]
pub struct DerivArgs {
    #[command(flatten)]
    pub eval: EvalArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub eval: EvalArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    /// Grid spacing on continuous parts; discrete scales list their members.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    ConstantMultiple,
    Product,
    Reciprocal,
    Quotient,
    Power,
    SumCounterexample,
    Increment,
}

impl From<RuleName> for Rule {
    fn from(r: RuleName) -> Rule {
        match r {
            RuleName::ConstantMultiple => Rule::ConstantMultiple,
            RuleName::Product => Rule::Product,
            RuleName::Reciprocal => Rule::Reciprocal,
            RuleName::Quotient => Rule::Quotient,
            RuleName::Power => Rule::Power,
            RuleName::SumCounterexample => Rule::SumCounterexample,
            RuleName::Increment => Rule::Increment,
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub rule: RuleName,
    #[arg(long)]
    pub scale: String,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Comma-separated evaluation points.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["from", "to"])]
    pub points: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "to")]
    pub from: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "from")]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub pass_tol: f64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub h0: Option<f64>,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        Outcome {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERIC
    }
}

/// One derivative evaluation as printed by `deriv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub t: f64,
    pub sigma_t: f64,
    pub mu_t: f64,
    pub classification: String,
    pub alpha: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub method: String,
    /// Estimator residual; `None` for the exact quotient.
    pub residual: Option<f64>,
}

impl OutputRecord {
    pub fn new(scale: &TimeScale, t: f64, alpha: f64, r: &DerivResult) -> Result<Self> {
        let sigma = scale.sigma(t)?;
        let numeric = !r.diagnostics.sides_probed.is_empty();
        Ok(OutputRecord {
            t,
            sigma_t: sigma,
            mu_t: sigma - t,
            classification: r.classification.to_string(),
            alpha,
            value_re: r.value.re,
            value_im: r.value.im,
            method: r.method.as_str().to_string(),
            residual: numeric.then_some(r.diagnostics.last_residual),
        })
    }
}

/// A `table` row; the value columns are empty when evaluation failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub t: f64,
    pub sigma: f64,
    pub mu: f64,
    pub class: String,
    pub alpha: f64,
    pub re: Option<f64>,
    pub im: Option<f64>,
    pub method: Option<String>,
    pub error: Option<String>,
}

/// Parse arguments (including the program name) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match cli.command {
        Command::Deriv(a) => cmd_deriv(&a),
        Command::Table(a) => cmd_table(&a),
        Command::Check(a) => cmd_check(&a),
    }
}

fn config(tol: Option<f64>, h0: Option<f64>) -> Result<DerivConfig> {
    let mut cfg = DerivConfig::default();
    if let Some(tol) = tol {
        cfg.tol = tol;
    }
    cfg.h0 = h0;
    cfg.validate()?;
    Ok(cfg)
}

struct Evaluator {
    scale: TimeScale,
    f: Expr,
    alpha: f64,
    order_n: bool,
    cfg: DerivConfig,
}

impl Evaluator {
    fn new(a: &EvalArgs) -> Result<Self> {
        let scale: TimeScale = a.scale.parse()?;
        let f = Expr::parse(&a.f)?;
        if a.alpha > 1.0 && !a.order_n {
            return Err(Error::InvalidOrder {
                alpha: a.alpha,
                range: "(0, 1] (pass --order-n for higher orders)",
            });
        }
        Ok(Evaluator {
            scale,
            f,
            alpha: a.alpha,
            order_n: a.order_n,
            cfg: config(a.tol, a.h0)?,
        })
    }

    fn eval(&self, t: f64) -> Result<DerivResult> {
        if self.order_n {
            deriv_higher(&self.f, &self.scale, t, self.alpha, &self.cfg)
        } else {
            deriv(&self.f, &self.scale, t, self.alpha, &self.cfg)
        }
    }

    fn record(&self, t: f64) -> Result<OutputRecord> {
        let t = self.scale.locate(t)?;
        let r = self.eval(t)?;
        OutputRecord::new(&self.scale, t, self.alpha, &r)
    }

    fn row(&self, t: f64) -> Result<TableRow> {
        let sigma = self.scale.sigma(t)?;
        let class = self.scale.classify(t)?.to_string();
        let mut row = TableRow {
            t,
            sigma,
            mu: sigma - t,
            class,
            alpha: self.alpha,
            re: None,
            im: None,
            method: None,
            error: None,
        };
        match self.eval(t) {
            Ok(r) => {
                row.re = Some(r.value.re);
                row.im = Some(r.value.im);
                row.method = Some(r.method.as_str().to_string());
            }
            Err(e) => row.error = Some(e.kind().to_string()),
        }
        Ok(row)
    }
}

/// Rewrite `-0.0` as `0.0` everywhere so output does not depend on the sign
/// of zero.
fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.as_f64() == Some(0.0) && n.is_f64() => *v = Value::from(0.0),
        Value::Array(items) => items.iter_mut().for_each(normalize),
        Value::Object(map) => map.values_mut().for_each(normalize),
        _ => {}
    }
}

fn to_json<S: Serialize>(x: &S) -> String {
    let mut v = serde_json::to_value(x).expect("output types serialize");
    normalize(&mut v);
    let mut s = serde_json::to_string(&v).expect("values serialize");
    s.push('\n');
    s
}

/// Shortest round-trip form, identical to the JSON rendering.
fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::to_string(&x).expect("finite numbers serialize")
}

pub fn cmd_deriv(a: &DerivArgs) -> Outcome {
    match Evaluator::new(&a.eval).and_then(|ev| ev.record(a.t)) {
        Ok(rec) => Outcome::ok(to_json(&rec)),
        Err(e) => Outcome::error(&e),
    }
}

pub fn cmd_table(a: &TableArgs) -> Outcome {
    let rows = Evaluator::new(&a.eval).and_then(|ev| {
        let points = ev.scale.points_in(a.from, a.to, a.step)?;
        if points.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "no points of {} in [{}, {}]",
                ev.scale, a.from, a.to
            )));
        }
        points
            .into_iter()
            .map(|t| ev.row(t))
            .collect::<Result<Vec<_>>>()
    });
    let rows = match rows {
        Ok(rows) => rows,
        Err(e) => return Outcome::error(&e),
    };
    let stdout = match a.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from("t,sigma,mu,class,alpha,re,im,method\n");
            for r in &rows {
                let class = match &r.error {
                    Some(kind) => format!("{};error={kind}", r.class),
                    None => r.class.clone(),
                };
                let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    num(r.t),
                    num(r.sigma),
                    num(r.mu),
                    class,
                    num(r.alpha),
                    opt(r.re),
                    opt(r.im),
                    r.method.as_deref().unwrap_or("")
                );
            }
            out
        }
    };
    let failures: Vec<String> = rows
        .iter()
        .filter_map(|r| r.error.as_ref().map(|k| format!("t={}: {k}", num(r.t))))
        .collect();
    let stderr = if failures.is_empty() {
        String::new()
    } else {
        format!(
            "warning: {} of {} points failed ({})\n",
            failures.len(),
            rows.len(),
            failures.join(", ")
        )
    };
    let code = if failures.len() < rows.len() {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    };
    Outcome {
        code,
        stdout,
        stderr,
    }
}

fn parse_points(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::InvalidConfig(format!("bad point {s:?} in --points")))
        })
        .collect()
}

fn build_check(a: &CheckArgs) -> Result<(RuleCheck, TimeScale, Vec<f64>, DerivConfig)> {
    let scale: TimeScale = a.scale.parse()?;
    let parse_opt = |s: &Option<String>| s.as_deref().map(Expr::parse).transpose();
    let check = RuleCheck {
        rule: a.rule.into(),
        f: parse_opt(&a.f)?,
        g: parse_opt(&a.g)?,
        lambda: a.lambda,
        m: a.m,
    };
    let points = match (&a.points, a.from, a.to) {
        (Some(p), _, _) => parse_points(p)?,
        (None, Some(from), Some(to)) => scale.points_in(from, to, a.step)?,
        _ => return Err(Error::InvalidConfig("give --points or --from/--to".into())),
    };
    Ok((check, scale, points, config(a.tol, a.h0)?))
}

pub fn cmd_check(a: &CheckArgs) -> Outcome {
    let report = build_check(a)
        .and_then(|(check, scale, points, cfg)| check_rule(&check, &scale, &points, a.alpha, &cfg));
    let report = match report {
        Ok(r) => r,
        Err(e) => return Outcome::error(&e),
    };
    let stdout = to_json(&report);
    let (passed, why) = if report.points.is_empty() {
        (false, "no point was evaluated".to_string())
    } else if report.rule == Rule::SumCounterexample {
        let min = report
            .points
            .iter()
            .map(|p| p.residual)
            .fold(f64::INFINITY, f64::min);
        (
            min > 0.5,
            format!("smallest residual {min} is not above 0.5"),
        )
    } else {
        (
            report.max_residual <= a.pass_tol,
            format!(
                "max residual {} exceeds {}",
                report.max_residual, a.pass_tol
            ),
        )
    };
    if passed {
        Outcome::ok(stdout)
    } else {
        Outcome {
            code: EXIT_CHECK_FAILED,
            stdout,
            stderr: format!("check failed: {why}\n"),
        }
    }
}
