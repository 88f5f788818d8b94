use thiserror::Error;

use crate::timescale::Direction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building scales, parsing functions or
/// evaluating derivatives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid time scale: {0}")]
    InvalidScale(String),

    #[error("cannot parse scale spec {spec:?}: {message}")]
    ScaleSpec { spec: String, message: String },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("point {t} is not in the time scale")]
    PointNotInScale { t: f64 },

    #[error("point {t} is not in T^κ (left-scattered maximum)")]
    NotInKappa { t: f64 },

    #[error("no point of the scale within {h} of {t} {direction}")]
    NoPointOnSide {
        t: f64,
        direction: Direction,
        h: f64,
    },

    #[error("power undefined: 0 raised to non-positive exponent {alpha}")]
    PowUndefined { alpha: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("order {alpha} outside the admissible range {range}")]
    InvalidOrder { alpha: f64, range: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate denominator |σ^α(t) - t^α| = {magnitude:e} at t = {t}")]
    DegenerateDenominator { t: f64, magnitude: f64 },

    #[error(
        "limit did not converge at t = {t} after {probes} probes (last residual {residual:e})"
    )]
    LimitNotConverged {
        t: f64,
        probes: usize,
        residual: f64,
    },

    #[error("one-sided limits disagree at t = {t}: {detail}")]
    SideDisagreement { t: f64, detail: String },

    #[error("higher-order derivative unavailable at t = {t}: {reason}")]
    HigherOrderUnavailable { t: f64, reason: String },

    #[error("function vanishes at t = {t} or σ(t), rule precondition fails")]
    ZeroAtPoint { t: f64 },

    #[error("non-finite value produced at t = {t}")]
    NonFinite { t: f64 },

    #[error("empty point list")]
    EmptyPoints,
}

impl Error {
    /// Errors caused by the caller's input (malformed text, points outside
    /// the scale or outside T^κ) rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidScale(_)
                | Error::ScaleSpec { .. }
                | Error::Parse { .. }
                | Error::PointNotInScale { .. }
                | Error::NotInKappa { .. }
                | Error::InvalidOrder { .. }
                | Error::InvalidConfig(_)
                | Error::EmptyPoints
        )
    }

    /// Short machine-friendly tag used in CSV annotations.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidScale(_) => "InvalidScale",
            Error::ScaleSpec { .. } => "ScaleSpec",
            Error::Parse { .. } => "ParseError",
            Error::PointNotInScale { .. } => "PointNotInScale",
            Error::NotInKappa { .. } => "NotInKappa",
            Error::NoPointOnSide { .. } => "NoPointOnSide",
            Error::PowUndefined { .. } => "PowUndefined",
            Error::Domain(_) => "DomainError",
            Error::InvalidOrder { .. } => "InvalidOrder",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::LimitNotConverged { .. } => "LimitNotConverged",
            Error::SideDisagreement { .. } => "SideDisagreement",
            Error::HigherOrderUnavailable { .. } => "HigherOrderUnavailable",
            Error::ZeroAtPoint { .. } => "ZeroAtPoint",
            Error::NonFinite { .. } => "NonFinite",
            Error::EmptyPoints => "EmptyPoints",
        }
    }
}
