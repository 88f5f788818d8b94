//! Time scales: nonempty closed subsets of the real line.
//!
//! A [`TimeScale`] answers membership queries and exposes the forward and
//! backward jump operators σ and ρ, the graininess μ = σ − id, point
//! classification, and the T^κ test that screens derivative evaluation.
//!
//! Points handed in from decimal text rarely land exactly on a lattice, so
//! every query first snaps `t` onto the scale (see [`TimeScale::locate`]);
//! all arithmetic afterwards uses the snapped value.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance used by membership tests when none is supplied.
pub const MEMBERSHIP_RTOL: f64 = 1e-12;

/// Hard cap on the number of points [`TimeScale::points_in`] will produce.
const MAX_GRID_POINTS: usize = 1_000_000;

pub fn default_tol(t: f64) -> f64 {
    MEMBERSHIP_RTOL * t.abs().max(1.0)
}

/// A closed interval `[start, end]`; `start == end` is an isolated point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Part {
    pub start: f64,
    pub end: f64,
}

impl Part {
    pub fn interval(start: f64, end: f64) -> Self {
        Part { start, end }
    }

    pub fn point(p: f64) -> Self {
        Part { start: p, end: p }
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end
    }
}

/// The canonical representations a [`TimeScale`] can take.
#[derive(Debug, Clone, PartialEq)]
pub enum ScaleKind {
    Reals,
    Integers,
    /// `{offset + k·h : k ∈ ℤ}`
    HStep {
        h: f64,
        offset: f64,
    },
    /// `{q^k : k ∈ ℤ} ∪ {0}`
    QScale {
        q: f64,
    },
    /// Strictly increasing, nonempty.
    FiniteSet {
        points: Vec<f64>,
    },
    /// Sorted, pairwise disjoint closed intervals and isolated points.
    IntervalUnion {
        parts: Vec<Part>,
    },
}

/// A validated time scale. Construct through the named constructors or by
/// parsing a scale spec such as `"[0,1]u{2}"`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    kind: ScaleKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    FromLeft,
    FromRight,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::FromLeft => f.write_str("from the left"),
            Direction::FromRight => f.write_str("from the right"),
        }
    }
}

/// Classification of a point. At a finite maximum σ(t) = t, so the point is
/// reported right-dense with `is_max` set; the minimum is treated the same
/// way on the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointClass {
    pub right_scattered: bool,
    pub right_dense: bool,
    pub left_scattered: bool,
    pub left_dense: bool,
    pub is_max: bool,
    pub is_min: bool,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let right = if self.right_scattered {
            "right-scattered"
        } else {
            "right-dense"
        };
        let left = if self.left_scattered {
            "left-scattered"
        } else {
            "left-dense"
        };
        write!(f, "{right}|{left}")?;
        if self.is_max {
            f.write_str("|max")?;
        }
        if self.is_min {
            f.write_str("|min")?;
        }
        Ok(())
    }
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidScale(format!(
            "{what} must be finite, got {x}"
        )))
    }
}

impl TimeScale {
    pub fn reals() -> Self {
        TimeScale {
            kind: ScaleKind::Reals,
        }
    }

    pub fn integers() -> Self {
        TimeScale {
            kind: ScaleKind::Integers,
        }
    }

    pub fn h_step(h: f64, offset: f64) -> Result<Self> {
        check_finite(h, "step h")?;
        check_finite(offset, "offset")?;
        if h <= 0.0 {
            return Err(Error::InvalidScale(format!(
                "step h must be positive, got {h}"
            )));
        }
        Ok(TimeScale {
            kind: ScaleKind::HStep { h, offset },
        })
    }

    pub fn q_scale(q: f64) -> Result<Self> {
        check_finite(q, "q")?;
        if q <= 1.0 {
            return Err(Error::InvalidScale(format!("q must exceed 1, got {q}")));
        }
        Ok(TimeScale {
            kind: ScaleKind::QScale { q },
        })
    }

    pub fn finite_set(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidScale(
                "finite set needs at least one point".into(),
            ));
        }
        for &p in &points {
            check_finite(p, "point")?;
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidScale(
                "finite set points must be strictly increasing".into(),
            ));
        }
        Ok(TimeScale {
            kind: ScaleKind::FiniteSet { points },
        })
    }

    /// Parts are sorted by start; overlapping or touching parts are rejected.
    pub fn interval_union(mut parts: Vec<Part>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidScale(
                "interval union needs at least one part".into(),
            ));
        }
        for p in &parts {
            check_finite(p.start, "interval bound")?;
            check_finite(p.end, "interval bound")?;
            if p.start > p.end {
                return Err(Error::InvalidScale(format!(
                    "interval [{}, {}] has start > end",
                    p.start, p.end
                )));
            }
        }
        parts.sort_by(|a, b| a.start.total_cmp(&b.start));
        if let Some(w) = parts.windows(2).find(|w| w[0].end >= w[1].start) {
            return Err(Error::InvalidScale(format!(
                "parts [{}, {}] and [{}, {}] overlap",
                w[0].start, w[0].end, w[1].start, w[1].end
            )));
        }
        Ok(TimeScale {
            kind: ScaleKind::IntervalUnion { parts },
        })
    }

    pub fn kind(&self) -> &ScaleKind {
        &self.kind
    }

    /// `sup T`, or `None` when the scale is unbounded above.
    pub fn sup(&self) -> Option<f64> {
        match &self.kind {
            ScaleKind::Reals
            | ScaleKind::Integers
            | ScaleKind::HStep { .. }
            | ScaleKind::QScale { .. } => None,
            ScaleKind::FiniteSet { points } => points.last().copied(),
            ScaleKind::IntervalUnion { parts } => parts.last().map(|p| p.end),
        }
    }

    /// `inf T`, or `None` when the scale is unbounded below.
    pub fn inf(&self) -> Option<f64> {
        match &self.kind {
            ScaleKind::Reals | ScaleKind::Integers | ScaleKind::HStep { .. } => None,
            ScaleKind::QScale { .. } => Some(0.0),
            ScaleKind::FiniteSet { points } => points.first().copied(),
            ScaleKind::IntervalUnion { parts } => parts.first().map(|p| p.start),
        }
    }

    /// Nearest point of the scale to `t`, if it lies within `tol`.
    fn snap(&self, t: f64, tol: f64) -> Option<f64> {
        if !t.is_finite() {
            return None;
        }
        let within = |p: f64| ((p - t).abs() <= tol).then_some(p);
        match &self.kind {
            ScaleKind::Reals => Some(t),
            ScaleKind::Integers => within(t.round()),
            ScaleKind::HStep { h, offset } => {
                let k = ((t - offset) / h).round();
                within(offset + k * h)
            }
            ScaleKind::QScale { q } => {
                let zero = within(0.0);
                if t <= 0.0 {
                    return zero;
                }
                let k = (t.ln() / q.ln()).round();
                let lattice = if k.abs() < i32::MAX as f64 {
                    within(q.powi(k as i32))
                } else {
                    None
                };
                match (lattice, zero) {
                    (Some(p), Some(_)) if (p - t).abs() <= t.abs() => Some(p),
                    (Some(p), None) => Some(p),
                    (_, z) => z,
                }
            }
            ScaleKind::FiniteSet { points } => {
                let idx = points.partition_point(|&p| p < t);
                let below = idx.checked_sub(1).map(|i| points[i]);
                let above = points.get(idx).copied();
                let nearest = match (below, above) {
                    (Some(b), Some(a)) => {
                        if t - b <= a - t {
                            b
                        } else {
                            a
                        }
                    }
                    (Some(b), None) => b,
                    (None, Some(a)) => a,
                    (None, None) => return None,
                };
                within(nearest)
            }
            ScaleKind::IntervalUnion { parts } => parts
                .iter()
                .find(|p| t >= p.start - tol && t <= p.end + tol)
                .map(|p| t.clamp(p.start, p.end)),
        }
    }

    /// True iff the distance from `t` to the scale is at most `tol`
    /// (default `1e-12·max(1,|t|)`).
    pub fn member(&self, t: f64, tol: Option<f64>) -> bool {
        self.snap(t, tol.unwrap_or_else(|| default_tol(t)))
            .is_some()
    }

    /// Snap `t` onto the scale with the default tolerance.
    pub fn locate(&self, t: f64) -> Result<f64> {
        self.snap(t, default_tol(t))
            .ok_or(Error::PointNotInScale { t })
    }

    fn union_part(parts: &[Part], t: f64) -> usize {
        // `t` is already snapped, so it lies inside exactly one part.
        parts.partition_point(|p| p.end < t)
    }

    /// Forward jump σ(t) = inf{s ∈ T : s > t}; σ(max T) = max T.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let t = self.locate(t)?;
        Ok(match &self.kind {
            ScaleKind::Reals => t,
            ScaleKind::Integers => t + 1.0,
            ScaleKind::HStep { h, .. } => t + h,
            ScaleKind::QScale { q } => {
                if t == 0.0 {
                    0.0
                } else {
                    t * q
                }
            }
            ScaleKind::FiniteSet { points } => {
                let i = points.partition_point(|&p| p < t);
                points.get(i + 1).copied().unwrap_or(t)
            }
            ScaleKind::IntervalUnion { parts } => {
                let i = Self::union_part(parts, t);
                if t < parts[i].end {
                    t
                } else {
                    parts.get(i + 1).map_or(t, |p| p.start)
                }
            }
        })
    }

    /// Backward jump ρ(t) = sup{s ∈ T : s < t}; ρ(min T) = min T.
    pub fn rho(&self, t: f64) -> Result<f64> {
        let t = self.locate(t)?;
        Ok(match &self.kind {
            ScaleKind::Reals => t,
            ScaleKind::Integers => t - 1.0,
            ScaleKind::HStep { h, .. } => t - h,
            ScaleKind::QScale { q } => {
                if t == 0.0 {
                    0.0
                } else {
                    t / q
                }
            }
            ScaleKind::FiniteSet { points } => {
                let i = points.partition_point(|&p| p < t);
                i.checked_sub(1).map_or(t, |j| points[j])
            }
            ScaleKind::IntervalUnion { parts } => {
                let i = Self::union_part(parts, t);
                if t > parts[i].start {
                    t
                } else {
                    i.checked_sub(1).map_or(t, |j| parts[j].end)
                }
            }
        })
    }

    /// Graininess μ(t) = σ(t) − t.
    pub fn graininess(&self, t: f64) -> Result<f64> {
        let t = self.locate(t)?;
        Ok(self.sigma(t)? - t)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        let t = self.locate(t)?;
        let sigma = self.sigma(t)?;
        let rho = self.rho(t)?;
        let right_scattered = sigma > t;
        let left_scattered = rho < t;
        Ok(PointClass {
            right_scattered,
            right_dense: !right_scattered,
            left_scattered,
            left_dense: !left_scattered,
            is_max: self.sup() == Some(t),
            is_min: self.inf() == Some(t),
        })
    }

    /// False exactly at a left-scattered maximum.
    pub fn in_kappa(&self, t: f64) -> Result<bool> {
        let c = self.classify(t)?;
        Ok(!(c.is_max && c.left_scattered))
    }

    /// Sides from which points of the scale accumulate at `t`.
    pub fn approach_directions(&self, t: f64) -> Result<Vec<Direction>> {
        let c = self.classify(t)?;
        let mut dirs = Vec::with_capacity(2);
        if c.left_dense && !c.is_min {
            dirs.push(Direction::FromLeft);
        }
        if c.right_dense && !c.is_max {
            dirs.push(Direction::FromRight);
        }
        Ok(dirs)
    }

    /// A point `s` of the scale on the requested side with `0 < |s − t| ≤ h`.
    ///
    /// Where the scale is an interval the point at distance exactly `h` is
    /// returned if the interval reaches that far, otherwise the interval
    /// endpoint. On a q-scale approaching 0 the largest `q^k ≤ h` is used.
    pub fn sample_toward(&self, t: f64, direction: Direction, h: f64) -> Result<f64> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "probe step must be positive, got {h}"
            )));
        }
        let t = self.locate(t)?;
        let none = Error::NoPointOnSide { t, direction, h };
        match (&self.kind, direction) {
            (ScaleKind::Reals, Direction::FromRight) => Ok(t + h),
            (ScaleKind::Reals, Direction::FromLeft) => Ok(t - h),
            (ScaleKind::QScale { q }, Direction::FromRight) if t == 0.0 => {
                let mut p = q.powf((h.ln() / q.ln()).floor());
                while p > h {
                    p /= q;
                }
                if p > 0.0 {
                    Ok(p)
                } else {
                    Err(none)
                }
            }
            (ScaleKind::IntervalUnion { parts }, dir) => {
                let part = parts[Self::union_part(parts, t)];
                match dir {
                    Direction::FromRight if t < part.end => Ok((t + h).min(part.end)),
                    Direction::FromLeft if t > part.start => Ok((t - h).max(part.start)),
                    _ => Err(none),
                }
            }
            _ => Err(none),
        }
    }

    /// Members of the scale in `[from, to]`, ascending.
    ///
    /// Discrete scales enumerate their points. Continuous pieces are sampled
    /// on the grid `from + i·step`, so `step` is required whenever the range
    /// meets an interval (or the accumulation point 0 of a q-scale, where
    /// `step` is the smallest positive power listed).
    pub fn points_in(&self, from: f64, to: f64, step: Option<f64>) -> Result<Vec<f64>> {
        if !(from.is_finite() && to.is_finite()) || from > to {
            return Err(Error::InvalidConfig(format!("empty range [{from}, {to}]")));
        }
        if let Some(s) = step {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "step must be positive, got {s}"
                )));
            }
        }
        let too_many =
            || Error::InvalidConfig(format!("more than {MAX_GRID_POINTS} points requested"));
        let lattice = |h: f64, offset: f64| -> Result<Vec<f64>> {
            let lo = ((from - offset) / h - MEMBERSHIP_RTOL).ceil();
            let hi = ((to - offset) / h + MEMBERSHIP_RTOL).floor();
            if hi - lo > MAX_GRID_POINTS as f64 {
                return Err(too_many());
            }
            let mut out = Vec::new();
            let mut k = lo;
            while k <= hi {
                out.push(offset + k * h);
                k += 1.0;
            }
            Ok(out)
        };
        let grid = || -> Result<Vec<f64>> {
            let step = step.ok_or_else(|| {
                Error::InvalidConfig("a --step is required to sample a continuous range".into())
            })?;
            let n = ((to - from) / step + MEMBERSHIP_RTOL).floor();
            if n > MAX_GRID_POINTS as f64 {
                return Err(too_many());
            }
            Ok((0..=n as usize).map(|i| from + i as f64 * step).collect())
        };
        let mut out = match &self.kind {
            ScaleKind::Reals => grid()?,
            ScaleKind::Integers => lattice(1.0, 0.0)?,
            ScaleKind::HStep { h, offset } => lattice(*h, *offset)?,
            ScaleKind::QScale { q } => {
                let mut pts = Vec::new();
                if from <= 0.0 && to >= 0.0 {
                    pts.push(0.0);
                }
                if to > 0.0 {
                    let lower = if from > 0.0 {
                        from
                    } else {
                        step.ok_or_else(|| {
                            Error::InvalidConfig(
                                "range reaches 0 on a q-scale; give --step as the smallest power to list".into(),
                            )
                        })?
                    };
                    let mut k = (lower.ln() / q.ln()).floor() as i32;
                    loop {
                        let p = q.powi(k);
                        if p > to * (1.0 + MEMBERSHIP_RTOL) {
                            break;
                        }
                        if p >= lower * (1.0 - MEMBERSHIP_RTOL) {
                            pts.push(p);
                        }
                        if pts.len() > MAX_GRID_POINTS {
                            return Err(too_many());
                        }
                        k += 1;
                    }
                }
                pts
            }
            ScaleKind::FiniteSet { points } => points
                .iter()
                .copied()
                .filter(|&p| p >= from && p <= to)
                .collect(),
            ScaleKind::IntervalUnion { parts } => {
                let mut pts: Vec<f64> = parts
                    .iter()
                    .filter(|p| p.is_point() && p.start >= from && p.start <= to)
                    .map(|p| p.start)
                    .collect();
                if parts
                    .iter()
                    .any(|p| !p.is_point() && p.end >= from && p.start <= to)
                {
                    pts.extend(grid()?.into_iter().filter_map(|t| self.locate(t).ok()));
                }
                pts
            }
        };
        out.sort_by(f64::total_cmp);
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for TimeScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ScaleKind::Reals => f.write_str("R"),
            ScaleKind::Integers => f.write_str("Z"),
            ScaleKind::HStep { h, offset } => {
                if *offset == 0.0 {
                    write!(f, "hZ:{h}")
                } else {
                    write!(f, "hZ:{h}:{offset}")
                }
            }
            ScaleKind::QScale { q } => write!(f, "qZ:{q}"),
            ScaleKind::FiniteSet { points } => {
                f.write_str("{")?;
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("}")
            }
            ScaleKind::IntervalUnion { parts } => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("u")?;
                    }
                    if p.is_point() {
                        write!(f, "{{{}}}", p.start)?;
                    } else {
                        write!(f, "[{},{}]", p.start, p.end)?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for TimeScale {
    type Err = Error;

    /// Grammar: `R | Z | hZ:<h>[:<offset>] | qZ:<q>` or a `u`-joined union of
    /// `{p1,p2,...}` and `[a,b]` pieces.
    fn from_str(spec: &str) -> Result<Self> {
        let fail = |message: String| Error::ScaleSpec {
            spec: spec.to_string(),
            message,
        };
        let num = |s: &str| -> Result<f64> {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| fail(format!("bad number {s:?}")))
        };
        let wrap = |e: Error| match e {
            Error::InvalidScale(m) => fail(m),
            other => other,
        };

        let s = spec.trim();
        match s {
            "R" => return Ok(TimeScale::reals()),
            "Z" => return Ok(TimeScale::integers()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("hZ:") {
            let fields: Vec<&str> = rest.split(':').collect();
            return match fields.as_slice() {
                [h] => TimeScale::h_step(num(h)?, 0.0).map_err(wrap),
                [h, off] => TimeScale::h_step(num(h)?, num(off)?).map_err(wrap),
                _ => Err(fail("expected hZ:<h> or hZ:<h>:<offset>".into())),
            };
        }
        if let Some(rest) = s.strip_prefix("qZ:") {
            return TimeScale::q_scale(num(rest)?).map_err(wrap);
        }
        if s.is_empty() {
            return Err(fail("empty spec".into()));
        }

        let mut parts = Vec::new();
        let mut any_interval = false;
        for piece in s.split('u') {
            let piece = piece.trim();
            if let Some(inner) = piece.strip_prefix('{').and_then(|p| p.strip_suffix('}')) {
                if inner.trim().is_empty() {
                    return Err(fail("empty point set".into()));
                }
                for p in inner.split(',') {
                    parts.push(Part::point(num(p)?));
                }
            } else if let Some(inner) = piece.strip_prefix('[').and_then(|p| p.strip_suffix(']')) {
                let bounds: Vec<&str> = inner.split(',').collect();
                let [a, b] = bounds.as_slice() else {
                    return Err(fail(format!("interval {piece:?} needs exactly two bounds")));
                };
                parts.push(Part::interval(num(a)?, num(b)?));
                any_interval = true;
            } else {
                return Err(fail(format!("unrecognised piece {piece:?}")));
            }
        }
        if any_interval {
            TimeScale::interval_union(parts).map_err(wrap)
        } else {
            let mut points: Vec<f64> = parts.into_iter().map(|p| p.start).collect();
            points.sort_by(f64::total_cmp);
            points.dedup();
            TimeScale::finite_set(points).map_err(wrap)
        }
    }
}
