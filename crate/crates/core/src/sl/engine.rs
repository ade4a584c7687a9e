//! Prüfer-angle shooting for `-(P y')' + Q y = lambda W y` on `(x0, x1)`.
//!
//! The equation is integrated in a stretched variable `s` with
//! `dx/ds = h(x)`, where `h` vanishes linearly at singular ends, so the
//! dynamics near a pole stays bounded. Singular ends start on the regular
//! indicial branch at a small offset.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::ode::Dopri5;
use crate::numerics::roots::brent;

/// Relative offset of the starting point from a singular end.
pub const POLE_OFFSET: f64 = 1e-8;
/// Largest eigenvalue bound tried while bracketing.
pub const KAPPA_MAX: f64 = 1e8;

/// Local data at a singular end: `P ~ slope * dist`, `W ~ dist^weight_power`
/// and the regular solution behaves like `dist^exponent`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleBranch {
    pub slope: f64,
    pub exponent: f64,
    pub weight_power: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum End {
    Neumann,
    Dirichlet,
    Singular(PoleBranch),
}

impl End {
    pub fn is_singular(&self) -> bool {
        matches!(self, End::Singular(_))
    }
}

/// Coefficients `(P, Q, W)` at `x`.
pub type Coefficients = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;

#[derive(Clone)]
pub struct SturmProblem {
    pub x0: f64,
    pub x1: f64,
    pub left: End,
    pub right: End,
    pub coefficients: Coefficients,
    /// Interior points where the coefficients are not smooth.
    pub breakpoints: Vec<f64>,
    pub offset: f64,
}

#[derive(Clone, Copy, Debug)]
enum MapKind {
    Identity,
    Left,
    Right,
    Logit,
}

/// Stretching `x(s)` adapted to the singular ends.
#[derive(Clone, Copy, Debug)]
pub struct Stretch {
    x0: f64,
    x1: f64,
    kind: MapKind,
}

impl Stretch {
    fn new(p: &SturmProblem) -> Stretch {
        let kind = match (p.left.is_singular(), p.right.is_singular()) {
            (true, true) => MapKind::Logit,
            (true, false) => MapKind::Left,
            (false, true) => MapKind::Right,
            (false, false) => MapKind::Identity,
        };
        Stretch { x0: p.x0, x1: p.x1, kind }
    }

    pub fn x(&self, s: f64) -> f64 {
        match self.kind {
            MapKind::Identity => s,
            MapKind::Left => self.x0 + s.exp(),
            MapKind::Right => self.x1 - (-s).exp(),
            MapKind::Logit => {
                let w = self.x1 - self.x0;
                if s <= 0.0 {
                    let e = s.exp();
                    self.x0 + w * e / (1.0 + e)
                } else {
                    self.x1 - w / (1.0 + s.exp())
                }
            }
        }
    }

    pub fn s(&self, x: f64) -> f64 {
        match self.kind {
            MapKind::Identity => x,
            MapKind::Left => (x - self.x0).ln(),
            MapKind::Right => -(self.x1 - x).ln(),
            MapKind::Logit => ((x - self.x0) / (self.x1 - x)).ln(),
        }
    }

    /// Distances of `x(s)` to both ends, accurate near either end.
    fn distances(&self, s: f64) -> (f64, f64) {
        let w = self.x1 - self.x0;
        match self.kind {
            MapKind::Identity => (s - self.x0, self.x1 - s),
            MapKind::Left => {
                let d = s.exp();
                (d, w - d)
            }
            MapKind::Right => {
                let d = (-s).exp();
                (w - d, d)
            }
            MapKind::Logit => {
                let l = w / (1.0 + (-s).exp());
                let r = w / (1.0 + s.exp());
                (l, r)
            }
        }
    }

    /// `dx/ds` at `s`.
    pub fn h(&self, s: f64) -> f64 {
        let (l, r) = self.distances(s);
        match self.kind {
            MapKind::Identity => 1.0,
            MapKind::Left => l,
            MapKind::Right => r,
            MapKind::Logit => l * r / (self.x1 - self.x0),
        }
    }

    /// `x(s)` evaluated from the nearer end.
    fn point(&self, s: f64) -> f64 {
        let (l, r) = self.distances(s);
        if l <= r {
            self.x0 + l
        } else {
            self.x1 - r
        }
    }
}

/// One sample of a shot solution.
#[derive(Clone, Copy, Debug)]
pub struct ShotSample {
    pub x: f64,
    pub theta: f64,
    pub log_r: f64,
}

impl SturmProblem {
    pub fn stretch(&self) -> Stretch {
        Stretch::new(self)
    }

    fn delta(&self) -> f64 {
        self.offset * (self.x1 - self.x0)
    }

    /// Parameter interval actually integrated.
    pub fn s_range(&self) -> (f64, f64) {
        let st = self.stretch();
        let d = self.delta();
        let a = if self.left.is_singular() { st.s(self.x0 + d) } else { st.s(self.x0) };
        let b = if self.right.is_singular() { st.s(self.x1 - d) } else { st.s(self.x1) };
        (a, b)
    }

    /// Point where the two shots are matched.
    pub fn matching_point(&self) -> f64 {
        0.5 * (self.x0 + self.x1)
    }

    fn s_breaks(&self) -> Vec<f64> {
        let st = self.stretch();
        self.breakpoints
            .iter()
            .filter(|b| **b > self.x0 && **b < self.x1)
            .map(|b| st.s(*b))
            .collect()
    }

    fn start_angle(&self, lambda: f64, left: bool) -> f64 {
        let end = if left { self.left } else { self.right };
        let d = self.delta();
        match end {
            End::Dirichlet => {
                if left {
                    0.0
                } else {
                    PI
                }
            }
            End::Neumann => PI / 2.0,
            End::Singular(b) => {
                let x = if left { self.x0 + d } else { self.x1 - d };
                let w = (self.coefficients)(x)[2];
                let corr = lambda * w * d / (b.weight_power + 1.0 + 2.0 * b.exponent);
                let r0 = if left { b.slope * b.exponent - corr } else { -b.slope * b.exponent + corr };
                1f64.atan2(r0)
            }
        }
    }

    fn rhs(&self, st: &Stretch, lambda: f64, s: f64, theta: f64) -> (f64, f64) {
        let x = st.point(s);
        let h = st.h(s);
        let [p, q, w] = (self.coefficients)(x);
        let (sn, cs) = theta.sin_cos();
        let dtheta = h * (cs * cs / p - (q - lambda * w) * sn * sn);
        let dlogr = h * sn * cs * (1.0 / p + q - lambda * w);
        (dtheta, dlogr)
    }

    /// Integrates from one end to the matching point, recording the state at
    /// the requested `s` values (which must be ordered away from the start).
    fn shoot(&self, lambda: f64, left: bool, record: &[f64]) -> Result<(f64, f64, Vec<ShotSample>)> {
        let st = self.stretch();
        let (sa, sb) = self.s_range();
        let sc = st.s(self.matching_point());
        let (start, stop) = if left { (sa, sc) } else { (sb, sc) };
        let mut marks: Vec<(f64, bool)> = self
            .s_breaks()
            .into_iter()
            .filter(|b| (b - start) * (stop - b) > 0.0)
            .map(|b| (b, false))
            .chain(record.iter().map(|r| (*r, true)))
            .collect();
        marks.push((stop, false));
        if left {
            marks.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        } else {
            marks.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        }
        let mut ode = Dopri5::new(1e-12, 1e-12);
        let mut f = |s: f64, y: &[f64; 2]| {
            let (a, b) = self.rhs(&st, lambda, s, y[0]);
            [a, b]
        };
        let mut state = [self.start_angle(lambda, left), 0.0];
        let mut t = start;
        let mut samples = Vec::with_capacity(record.len());
        for (mark, keep) in marks {
            if (mark - t) * (stop - start) < 0.0 {
                continue;
            }
            state = ode.integrate(&mut f, t, state, mark)?;
            t = mark;
            if keep {
                samples.push(ShotSample {
                    x: st.point(mark),
                    theta: state[0],
                    log_r: state[1],
                });
            }
        }
        Ok((state[0], state[1], samples))
    }

    fn shoot_angle(&self, lambda: f64, left: bool) -> Result<f64> {
        let st = self.stretch();
        let (sa, sb) = self.s_range();
        let sc = st.s(self.matching_point());
        let (start, stop) = if left { (sa, sc) } else { (sb, sc) };
        let mut marks: Vec<f64> = self.s_breaks().into_iter().filter(|b| (b - start) * (stop - b) > 0.0).collect();
        if left {
            marks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        } else {
            marks.sort_by(|a, b| b.partial_cmp(a).unwrap());
        }
        marks.push(stop);
        let mut ode = Dopri5::new(1e-12, 1e-12);
        let mut f = |s: f64, y: &[f64; 1]| [self.rhs(&st, lambda, s, y[0]).0];
        let mut state = [self.start_angle(lambda, left)];
        let mut t = start;
        for mark in marks {
            state = ode.integrate(&mut f, t, state, mark)?;
            t = mark;
        }
        Ok(state[0])
    }

    /// Phase mismatch `theta_L(c) - theta_R(c)`, increasing in `lambda`;
    /// the `k`-th eigenvalue solves `mismatch = k pi`.
    pub fn mismatch(&self, lambda: f64) -> Result<f64> {
        Ok(self.shoot_angle(lambda, true)? - self.shoot_angle(lambda, false)?)
    }

    /// The `k`-th eigenvalue (zero based) and its phase residual.
    pub fn eigenvalue(&self, k: usize) -> Result<(f64, f64)> {
        let target = k as f64 * PI;
        let g = |l: f64| self.mismatch(l).map(|d| d - target);
        let mut lo = 0.0;
        let mut g_lo = g(lo)?;
        if g_lo.abs() <= 1e-14 {
            return Ok((lo, g_lo.abs()));
        }
        let mut step = 1.0;
        while g_lo > 0.0 {
            lo = -step;
            g_lo = g(lo)?;
            step *= 2.0;
            if step > KAPPA_MAX {
                return Err(Error::NoBracket {
                    index: k,
                    limit: -KAPPA_MAX,
                    count: g_lo + target,
                });
            }
        }
        let mut hi = 1.0f64.max(2.0 * lo.abs());
        let mut g_hi = g(hi)?;
        while g_hi < 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > KAPPA_MAX {
                return Err(Error::NoBracket {
                    index: k,
                    limit: KAPPA_MAX,
                    count: g_hi + target,
                });
            }
            g_hi = g(hi)?;
        }
        let mut failure = None;
        let root = brent(
            lo,
            hi,
            |l| match g(l) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            },
            1e-13,
            1e-15,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok((root, g(root)?.abs()))
    }

    /// Samples of the eigenfunction for eigenvalue `lambda`: `(x, y, P y')`,
    /// normalized to unit maximum and positive near the left end.
    pub fn eigenfunction(&self, lambda: f64, per_side: usize) -> Result<Vec<(f64, f64, f64)>> {
        let st = self.stretch();
        let (sa, sb) = self.s_range();
        let sc = st.s(self.matching_point());
        let left_marks: Vec<f64> = (0..per_side).map(|i| sa + (sc - sa) * i as f64 / per_side as f64).collect();
        let right_marks: Vec<f64> = (0..per_side).map(|i| sb + (sc - sb) * i as f64 / per_side as f64).collect();
        let (tl, rl, mut left) = self.shoot(lambda, true, &left_marks)?;
        let (tr, rr, mut right) = self.shoot(lambda, false, &right_marks)?;
        let sign = if (tl - tr).cos() >= 0.0 { 1.0 } else { -1.0 };
        let shift = rl - rr;
        left.push(ShotSample { x: st.point(sc), theta: tl, log_r: rl });
        right.reverse();
        let mut raw: Vec<(f64, f64, f64, f64)> = left.iter().map(|p| (p.x, p.theta, p.log_r, 1.0)).collect();
        raw.extend(right.iter().map(|p| (p.x, p.theta, p.log_r + shift, sign)));
        let top = raw.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
        let mut out: Vec<(f64, f64, f64)> = raw
            .iter()
            .map(|&(x, th, lr, sg)| {
                let r = (lr - top).exp();
                (x, sg * r * th.sin(), sg * r * th.cos())
            })
            .collect();
        let peak = out.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
        let lead = out.iter().find(|v| v.1.abs() > 1e-8 * peak).map(|v| v.1.signum()).unwrap_or(1.0);
        let scale = lead / peak;
        for v in &mut out {
            v.1 *= scale;
            v.2 *= scale;
        }
        Ok(out)
    }
}

/// Number of sign changes among samples that are not negligibly small.
pub fn sign_changes(values: impl IntoIterator<Item = f64>) -> usize {
    let values: Vec<f64> = values.into_iter().collect();
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0;
    let mut count = 0;
    for v in values {
        if v.abs() <= 1e-10 * peak {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            count += 1;
        }
        last = v.signum();
    }
    count
}
