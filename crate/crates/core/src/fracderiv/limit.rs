//! One-sided limit estimators for difference quotients at dense points.

use serde::Serialize;

use crate::cpow::{serialize_re_im, CValue};
use crate::error::{Error, Result};
use crate::timescale::{Direction, TimeScale};

/// Outcome of probing one side of a dense point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideProbe {
    pub direction: Direction,
    pub probes: usize,
    #[serde(serialize_with = "serialize_re_im")]
    pub limit: CValue,
    pub residual: f64,
}

/// Geometric halving `h_k = h0·2^{-k}`, `k = 0..max_halvings`.
///
/// Each raw quotient `q_k` (at distance `x_k = |s_k − t|`) is combined with
/// its predecessor into `a_k = (x_{k−1} q_k − x_k q_{k−1}) / (x_{k−1} − x_k)`,
/// which removes the leading first-order term. The side is converged once
/// two consecutive relative changes `|a_k − a_{k−1}| / (1 + |a_k|)` are at
/// most `tol`. Probes landing on the same point as the previous one (an
/// interval endpoint reached before `h` is small enough) are skipped.
pub(crate) fn halving_limit(
    scale: &TimeScale,
    t: f64,
    direction: Direction,
    h0: f64,
    max_halvings: u32,
    tol: f64,
    quotient: &mut dyn FnMut(f64) -> Result<CValue>,
) -> Result<SideProbe> {
    let mut prev: Option<(f64, CValue)> = None;
    let mut prev_acc: Option<CValue> = None;
    let mut probes = 0;
    let mut streak = 0;
    let mut residual = f64::INFINITY;
    for k in 0..max_halvings {
        let h = h0 * 0.5f64.powi(k as i32);
        let s = match scale.sample_toward(t, direction, h) {
            Ok(s) => s,
            Err(Error::NoPointOnSide { .. }) => continue,
            Err(e) => return Err(e),
        };
        let x = (s - t).abs();
        if x == 0.0 || prev.is_some_and(|(px, _)| x >= px) {
            continue;
        }
        let q = quotient(s)?;
        probes += 1;
        if let Some((px, pq)) = prev {
            let acc = (q * px - pq * x) / (px - x);
            if let Some(pa) = prev_acc {
                residual = (acc - pa).norm() / (1.0 + acc.norm());
                if residual <= tol {
                    streak += 1;
                    if streak >= 2 {
                        return Ok(SideProbe {
                            direction,
                            probes,
                            limit: acc,
                            residual,
                        });
                    }
                } else {
                    streak = 0;
                }
            }
            prev_acc = Some(acc);
        }
        prev = Some((x, q));
    }
    Err(Error::LimitNotConverged {
        t,
        probes,
        residual,
    })
}

/// Polynomial extrapolation to zero distance (Neville tableau over the
/// actual probe distances `|s_k − t|`), in the spirit of Ridders' method.
///
/// Only valid when the quotient has an expansion in powers of `s − t`,
/// which holds for the ordinary (order one) difference quotient of a smooth
/// function. Returns the entry with the smallest error estimate; the
/// caller decides whether that estimate is acceptable.
pub(crate) fn extrapolated_limit(
    scale: &TimeScale,
    t: f64,
    direction: Direction,
    h0: f64,
    max_rows: u32,
    quotient: &mut dyn FnMut(f64) -> Result<CValue>,
) -> Result<SideProbe> {
    let mut nodes: Vec<f64> = Vec::new();
    let mut table: Vec<Vec<CValue>> = Vec::new();
    let mut best = None::<(CValue, f64)>;
    let mut probes = 0;
    let mut k = 0;
    while table.len() < max_rows as usize && k < 64 {
        let h = h0 * 0.5f64.powi(k);
        k += 1;
        let s = match scale.sample_toward(t, direction, h) {
            Ok(s) => s,
            Err(Error::NoPointOnSide { .. }) => continue,
            Err(e) => return Err(e),
        };
        let x = (s - t).abs();
        if x == 0.0 || nodes.last().is_some_and(|&last| x >= last) {
            continue;
        }
        let q = quotient(s)?;
        probes += 1;
        nodes.push(x);
        let i = nodes.len() - 1;
        let mut row = vec![q];
        for j in 1..=i {
            let (xi, xij) = (nodes[i], nodes[i - j]);
            let p = (row[j - 1] * xij - table[i - 1][j - 1] * xi) / (xij - xi);
            let err = (p - row[j - 1])
                .norm()
                .max((p - table[i - 1][j - 1]).norm());
            if best.is_none_or(|(_, e)| err <= e) {
                best = Some((p, err));
            }
            row.push(p);
        }
        // higher-order diagonal moving away from the best estimate: rounding
        // has taken over
        let diverging =
            i >= 3 && best.is_some_and(|(_, e)| (row[i] - table[i - 1][i - 1]).norm() >= 2.0 * e);
        table.push(row);
        if diverging {
            break;
        }
    }
    match best {
        Some((value, err)) => Ok(SideProbe {
            direction,
            probes,
            limit: value,
            residual: err / (1.0 + value.norm()),
        }),
        None => Err(Error::LimitNotConverged {
            t,
            probes,
            residual: f64::INFINITY,
        }),
    }
}

/// Mean of the side limits, provided they agree within
/// `agreement_tol·(1 + |mean|)`.
pub(crate) fn combine_sides(t: f64, sides: &[SideProbe], agreement_tol: f64) -> Result<CValue> {
    let n = sides.len() as f64;
    let mean = sides.iter().map(|s| s.limit).sum::<CValue>() / n;
    let bound = agreement_tol * (1.0 + mean.norm());
    for a in sides {
        for b in sides {
            if (a.limit - b.limit).norm() > bound {
                return Err(Error::SideDisagreement {
                    t,
                    detail: format!(
                        "{} limit {} vs {} limit {}",
                        a.direction, a.limit, b.direction, b.limit
                    ),
                });
            }
        }
    }
    Ok(mean)
}
