//! Geometry of surfaces of revolution: area, curvature, the level-set
//! weight of the radial Green function, rotational modes and the conformal
//! modulus of annuli.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::model_weights::g_star;
use crate::numerics::quad;
use crate::profile::{EndKind, Profile};
use crate::sl::engine::{End, PoleBranch, SturmProblem, POLE_OFFSET};
use crate::sl::Bc;
use crate::weight::{Weight, WeightEnd};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceReport {
    pub model: String,
    pub area: f64,
    pub length: f64,
    /// Essential supremum of `-f''/f` over the smooth pieces.
    pub curvature_max: f64,
    pub curvature_min: f64,
    /// Total length of the boundary circles, absent for closed surfaces.
    pub boundary_length: Option<f64>,
    pub left_end: EndKind,
    pub right_end: EndKind,
}

/// Area, meridian length, curvature range and boundary length.
pub fn analyze(profile: &Profile) -> Result<SurfaceReport> {
    let mut kmax = f64::NEG_INFINITY;
    let mut kmin = f64::INFINITY;
    for u in profile.curvature_grid(400) {
        let j = profile.jet(u);
        if !(j.x > 0.0) {
            return Err(Error::InvalidProfile(format!("f = {} <= 0 at u = {u}", j.x)));
        }
        let k = j.curvature();
        if k.is_finite() {
            kmax = kmax.max(k);
            kmin = kmin.min(k);
        }
    }
    let (u0, u1) = profile.parameter_range();
    let ends = profile.ends();
    let boundary: f64 = [(ends[0], u0), (ends[1], u1)]
        .iter()
        .filter(|(e, _)| *e == EndKind::Boundary)
        .map(|(_, u)| 2.0 * PI * profile.jet(*u).x)
        .sum();
    Ok(SurfaceReport {
        model: profile.model().to_string(),
        area: profile.area()?,
        length: profile.length()?,
        curvature_max: kmax,
        curvature_min: kmin,
        boundary_length: (ends.contains(&EndKind::Boundary)).then_some(boundary),
        left_end: ends[0],
        right_end: ends[1],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleSpec {
    /// Pole at the left end, boundary circle at the right end.
    One,
    /// Poles at both ends of a closed surface.
    Two,
}

/// `G(a) = 4 pi^2 f(r(a))^2`, the weight of the radial Green function whose
/// level sets are the parallels.
pub fn green_weight(profile: &Profile, poles: PoleSpec) -> Result<Weight> {
    let ends = profile.ends();
    let right = match (poles, ends) {
        (_, [EndKind::Boundary, _]) => {
            return Err(Error::InvalidArgument("a pole is requested at a boundary-circle end".into()));
        }
        (PoleSpec::One, [_, EndKind::Boundary]) => WeightEnd::Regular,
        (PoleSpec::One, _) => {
            return Err(Error::InvalidArgument("a closed surface needs a pole at each end".into()));
        }
        (PoleSpec::Two, [_, EndKind::Pole]) => WeightEnd::Pole,
        (PoleSpec::Two, _) => {
            return Err(Error::InvalidArgument("a pole is requested at a boundary-circle end".into()));
        }
    };
    let m = profile.panel_area_total();
    let p = Arc::new(profile.clone());
    let breaks: Vec<f64> = profile.kinks().iter().map(|u| profile.area_at(*u)).collect();
    let eval = {
        let p = p.clone();
        move |a: f64| {
            let a = a.clamp(0.0, m);
            match p.u_at_area(a) {
                Ok(u) => {
                    let x = p.jet(u).x;
                    4.0 * PI * PI * x * x
                }
                Err(_) => f64::NAN,
            }
        }
    };
    Weight::new(&format!("green:{}", profile.model()), m, WeightEnd::Pole, right, Arc::new(eval), breaks)
}

/// Weight of a geodesic disk of area `m` in constant curvature `k`:
/// `a (4 pi - k a)`.
pub fn constant_curvature_weight(m: f64, k: f64) -> Result<Weight> {
    let right = if k > 0.0 && (k * m - 4.0 * PI).abs() <= 1e-12 { WeightEnd::Pole } else { WeightEnd::Regular };
    Weight::new(&format!("disk:{m},{k}"), m, WeightEnd::Pole, right, Arc::new(move |a| a * (4.0 * PI - k * a)), vec![])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoperimetricReport {
    pub pass: bool,
    /// Smallest `G - G*` on the comparison range (curvature-one units).
    pub min_slack: f64,
    pub min_at: f64,
    /// Largest `G - G*` on the comparison range.
    pub max_slack: f64,
    /// Smallest `G(a) - G*(M - a)` near the right pole of a closed surface.
    pub right_min_slack: Option<f64>,
    pub tolerance: f64,
}

/// Checks `G(a) >= a (4 pi - a)` after rescaling to curvature bound one,
/// and for closed surfaces `G(a) >= G*(M - a)` on `(M - 4 pi, M)`.
pub fn isoperimetric_check(weight: &Weight, curvature_bound: f64) -> Result<IsoperimetricReport> {
    let w = weight.rescaled(curvature_bound)?;
    let m = w.total();
    let top = m.min(4.0 * PI);
    let tol = 1e-9;
    let n = 2000;
    let grid: Vec<f64> = (1..n).map(|i| 0.5 * top * (1.0 - (PI * i as f64 / n as f64).cos())).collect();
    let mut min_slack = f64::INFINITY;
    let mut min_at = 0.0;
    let mut max_slack = f64::NEG_INFINITY;
    let mut ok = true;
    for &a in &grid {
        let c = g_star(a);
        let s = w.eval(a) - c;
        if s < min_slack {
            min_slack = s;
            min_at = a;
        }
        max_slack = max_slack.max(s);
        ok &= s >= -tol * c.max(1.0);
    }
    let right_min_slack = if w.right() == WeightEnd::Pole {
        let lo = (m - 4.0 * PI).max(0.0);
        let mut worst = f64::INFINITY;
        for i in 1..n {
            let a = lo + 0.5 * (m - lo) * (1.0 - (PI * i as f64 / n as f64).cos());
            let c = g_star(m - a);
            let s = w.eval(a) - c;
            worst = worst.min(s);
            ok &= s >= -tol * c.max(1.0);
        }
        Some(worst)
    } else {
        None
    };
    Ok(IsoperimetricReport {
        pass: ok,
        min_slack,
        min_at,
        max_slack,
        right_min_slack,
        tolerance: tol,
    })
}

/// The rotational mode `n` as a Sturm-Liouville problem in the profile
/// parameter: `-(x/sigma v')' + (m^2 sigma/x) v = mu x sigma v`, `m = n - nu`.
pub fn radial_problem(profile: &Profile, flux: Flux, n: i64, bc: [Bc; 2]) -> Result<SturmProblem> {
    let m = n as f64 - flux.nu();
    let pole = End::Singular(PoleBranch {
        slope: 1.0,
        exponent: m.abs(),
        weight_power: 1.0,
    });
    let ends = profile.ends();
    let mut conv = [End::Neumann; 2];
    for (i, side) in ["left", "right"].iter().enumerate() {
        conv[i] = match (ends[i], bc[i]) {
            (EndKind::Pole, Bc::SingularNeumann | Bc::Dirichlet) => pole,
            (EndKind::Boundary, Bc::RegularNeumann) => End::Neumann,
            (EndKind::Boundary, Bc::Dirichlet) => End::Dirichlet,
            (kind, b) => {
                return Err(Error::IncompatibleBoundary {
                    condition: b.to_string(),
                    end: format!("{side} {kind}"),
                })
            }
        };
    }
    let (u0, u1) = profile.parameter_range();
    let p = profile.clone();
    let m2 = m * m;
    Ok(SturmProblem {
        x0: u0,
        x1: u1,
        left: conv[0],
        right: conv[1],
        coefficients: Arc::new(move |u| {
            let j = p.jet(u);
            [j.x / j.sigma, m2 * j.sigma / j.x, j.x * j.sigma]
        }),
        breakpoints: profile.kinks().to_vec(),
        offset: POLE_OFFSET,
    })
}

/// Natural conditions of a profile: singular at poles, Neumann at boundaries.
pub fn natural_bc(profile: &Profile) -> [Bc; 2] {
    profile.ends().map(|e| match e {
        EndKind::Pole => Bc::SingularNeumann,
        EndKind::Boundary => Bc::RegularNeumann,
    })
}

/// `k`-th eigenvalue of rotational mode `n`.
pub fn radial_mode_eigenvalue(profile: &Profile, flux: Flux, n: i64, bc: [Bc; 2], k: usize) -> Result<f64> {
    let m = n as f64 - flux.nu();
    if m == 0.0 && k == 0 && !bc.contains(&Bc::Dirichlet) {
        return Ok(0.0);
    }
    Ok(radial_problem(profile, flux, n, bc)?.eigenvalue(k)?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatedEigenvalue {
    pub mu1: f64,
    /// Rotational index attaining the minimum.
    pub n: i64,
    /// Window `[-N, N + 1]` finally searched.
    pub window: i64,
}

/// First eigenvalue of the magnetic Laplacian by separation of variables:
/// the minimum over `n` of the first radial eigenvalue, with the natural
/// (magnetic Neumann) conditions at boundary circles.
pub fn separated_mu1(profile: &Profile, flux: Flux) -> Result<SeparatedEigenvalue> {
    let bc = natural_bc(profile);
    let mut window: i64 = 6;
    loop {
        let values: Vec<Result<(i64, f64)>> = (-window..=window + 1)
            .into_par_iter()
            .map(|n| radial_mode_eigenvalue(profile, flux, n, bc, 0).map(|v| (n, v)))
            .collect();
        let mut best = (0, f64::INFINITY);
        for v in values {
            let (n, mu) = v?;
            if mu < best.1 {
                best = (n, mu);
            }
        }
        if best.0 > -window && best.0 < window + 1 {
            return Ok(SeparatedEigenvalue {
                mu1: best.1,
                n: best.0,
                window,
            });
        }
        window *= 2;
        if window > 1 << 12 {
            return Err(Error::InvalidArgument("separation window failed to contain the minimizing mode".into()));
        }
    }
}

/// Conformal modulus `M = (1/2) int dr / f` of an annulus of revolution.
pub fn annulus_modulus(profile: &Profile) -> Result<f64> {
    if profile.ends() != [EndKind::Boundary, EndKind::Boundary] {
        return Err(Error::InvalidArgument("the modulus needs boundary circles at both ends (the integral diverges at a pole)".into()));
    }
    let (u0, u1) = profile.parameter_range();
    let v = quad::integrate(
        |u| {
            let j = profile.jet(u);
            j.sigma / j.x
        },
        u0,
        u1,
        profile.kinks(),
        1e-11,
    )?;
    Ok(0.5 * v)
}
