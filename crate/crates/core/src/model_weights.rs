//! Comparison weights built from `G*(a) = a (4 pi - a)`: the weight of the
//! unit cap itself and its plateau truncations for areas beyond `4 pi`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::sig12;
use crate::weight::{Weight, WeightEnd};

const FOUR_PI: f64 = 4.0 * PI;
const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// `a (4 pi - a)`.
pub fn g_star(a: f64) -> f64 {
    a * (FOUR_PI - a)
}

fn is_full_sphere(m: f64) -> bool {
    (m - FOUR_PI).abs() <= 1e-12 * FOUR_PI
}

/// `G*` on `(0, M)` for `0 < M <= 4 pi`; the right end is a pole only for `M = 4 pi`.
pub fn star(m: f64) -> Result<Weight> {
    if !(m > 0.0 && m <= FOUR_PI * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!("G* needs 0 < M <= 4 pi, got {m}")));
    }
    let (m, right) = if is_full_sphere(m) { (FOUR_PI, WeightEnd::Pole) } else { (m, WeightEnd::Regular) };
    Weight::new(&format!("star:{}", sig12(m)), m, WeightEnd::Pole, right, Arc::new(g_star), vec![])
}

/// Roots `(a_eps, b_eps) = 2 pi +- sqrt(4 pi^2 - eps)` of `G*(a) = eps`.
pub fn eps_roots(eps: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps < FOUR_PI_SQ) {
        return Err(Error::InvalidArgument(format!("plateau level must lie in (0, 4 pi^2), got {eps}")));
    }
    let r = (FOUR_PI_SQ - eps).sqrt();
    // b = eps / a avoids cancellation for small eps
    let a = 2.0 * PI + r;
    Ok((a, eps / a))
}

/// Plateau truncation of `G*` on `(0, M)`, `M > 4 pi`.
///
/// Closed variant: `G*` on `(0, a_eps)`, `eps` on `(a_eps, M - b_eps)` and
/// `G*(M - a)` on `(M - b_eps, M)`. Boundary variant: `G*` then `eps` up to `M`.
pub fn star_eps(m: f64, eps: f64, closed: bool) -> Result<Weight> {
    if !(m > FOUR_PI && m.is_finite()) {
        return Err(Error::InvalidArgument(format!("plateau weights need M > 4 pi, got {m}")));
    }
    let (a_eps, b_eps) = eps_roots(eps)?;
    let label = format!("star-eps:{},{},{}", sig12(m), sig12(eps), if closed { "closed" } else { "open" });
    if closed {
        let cut = m - b_eps;
        Weight::new(
            &label,
            m,
            WeightEnd::Pole,
            WeightEnd::Pole,
            Arc::new(move |a| {
                if a <= a_eps {
                    g_star(a)
                } else if a < cut {
                    eps
                } else {
                    g_star(m - a)
                }
            }),
            vec![a_eps, cut],
        )
    } else {
        Weight::new(
            &label,
            m,
            WeightEnd::Pole,
            WeightEnd::Regular,
            Arc::new(move |a| if a <= a_eps { g_star(a) } else { eps }),
            vec![a_eps],
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsBound {
    /// Largest admissible plateau level found (0 if none).
    pub eps: f64,
    pub diagnostic: Option<String>,
}

fn dominates(weight: &Weight, grid: &[f64], eps: f64) -> bool {
    let closed = weight.right() == WeightEnd::Pole;
    let Ok(cmp) = star_eps(weight.total(), eps, closed) else {
        return false;
    };
    grid.iter().all(|&a| {
        let c = cmp.eval(a);
        weight.eval(a) >= c - 1e-10 * c.max(1.0)
    })
}

/// Largest `eps` on a geometric scan (refined by bisection) with
/// `G >= G*_eps` pointwise. Requires `M > 4 pi`.
pub fn eps_max(weight: &Weight) -> Result<EpsBound> {
    let m = weight.total();
    if !(m > FOUR_PI) {
        return Err(Error::InvalidArgument(format!("plateau comparison needs M > 4 pi, got {m}")));
    }
    let n = 3000;
    let mut grid: Vec<f64> = (1..n).map(|i| 0.5 * m * (1.0 - (PI * i as f64 / n as f64).cos())).collect();
    grid.extend_from_slice(weight.breakpoints());
    let top = FOUR_PI_SQ * (1.0 - 1e-6);
    let floor = 1e-10;
    let ratio = 0.5;
    let mut prev_fail = None;
    let mut eps = top;
    while eps >= floor {
        if dominates(weight, &grid, eps) {
            let Some(mut hi) = prev_fail else {
                return Ok(EpsBound { eps, diagnostic: None });
            };
            let mut lo = eps;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if dominates(weight, &grid, mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-12 * hi {
                    break;
                }
            }
            return Ok(EpsBound { eps: lo, diagnostic: None });
        }
        prev_fail = Some(eps);
        eps *= ratio;
    }
    Ok(EpsBound {
        eps: 0.0,
        diagnostic: Some(format!("G < G*_eps somewhere for every eps down to {floor:e}; the surface violates the isoperimetric comparison")),
    })
}
