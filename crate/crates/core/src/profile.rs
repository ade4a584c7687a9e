//! Profiles of surfaces of revolution `dr^2 + f(r)^2 dtheta^2`.
//!
//! A profile is stored parametrically: a parameter `u` on `[u0, u1]` with the
//! radius `x(u) = f(r(u))` and the speed `sigma(u) = dr/du`. Most models use
//! `u = r`; spheroids use the polar angle of the generating ellipse.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::pchip::Pchip;
use crate::numerics::quad::{self, GaussRule};
use crate::numerics::roots::brent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EndKind {
    /// The profile closes smoothly on the axis: `f -> 0`, `|f'| -> 1`.
    Pole,
    /// A boundary circle of positive length.
    Boundary,
}

impl fmt::Display for EndKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndKind::Pole => "pole",
            EndKind::Boundary => "boundary",
        })
    }
}

/// Radius and speed with their parameter derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub x: f64,
    pub x_u: f64,
    pub x_uu: f64,
    pub sigma: f64,
    pub sigma_u: f64,
}

impl Jet {
    fn arclength(f: f64, f_r: f64, f_rr: f64) -> Jet {
        Jet {
            x: f,
            x_u: f_r,
            x_uu: f_rr,
            sigma: 1.0,
            sigma_u: 0.0,
        }
    }

    /// `df/dr`.
    pub fn f_r(&self) -> f64 {
        self.x_u / self.sigma
    }

    /// `d^2 f / dr^2`.
    pub fn f_rr(&self) -> f64 {
        (self.x_uu * self.sigma - self.x_u * self.sigma_u) / self.sigma.powi(3)
    }

    /// Gaussian curvature `-f''/f`.
    pub fn curvature(&self) -> f64 {
        -self.f_rr() / self.x
    }

    fn scaled(self, c: f64) -> Jet {
        Jet {
            x: c * self.x,
            x_u: c * self.x_u,
            x_uu: c * self.x_uu,
            sigma: c * self.sigma,
            sigma_u: c * self.sigma_u,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    /// Round sphere of constant curvature.
    Sphere { curvature: f64 },
    /// Geodesic cap of the given radius in a space of constant curvature
    /// (curvature 0 gives a flat disk).
    Cap { radius: f64, curvature: f64 },
    /// Flat tube `f = radius` of the given length.
    Tube { radius: f64, length: f64 },
    /// Two unit hemispheres joined by a unit cylinder of the given length.
    Cigar { length: f64 },
    /// One unit hemisphere followed by a unit cylinder, open at the far end.
    CappedCigar { length: f64 },
    /// Ellipsoid of revolution with equatorial radius `b` and half-axis `c`.
    Spheroid { b: f64, c: f64 },
    /// Part of a spheroid up to polar angle `t_max`.
    SpheroidCap { b: f64, c: f64, t_max: f64 },
    /// Annulus `f = 1 + h r (1 - r)` on `[0, 1]`.
    Bump { height: f64 },
    /// Sampled profile.
    Table { samples: usize },
    /// User-supplied closed form.
    Custom { name: String },
    /// A model rescaled by `factor`.
    Scaled { factor: f64, base: Box<Model> },
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Sphere { curvature } => write!(f, "sphere:{curvature}"),
            Model::Cap { radius, curvature } => write!(f, "cap:{radius},{curvature}"),
            Model::Tube { radius, length } => write!(f, "tube:{radius},{length}"),
            Model::Cigar { length } => write!(f, "cigar:{length}"),
            Model::CappedCigar { length } => write!(f, "capped-cigar:{length}"),
            Model::Spheroid { b, c } => write!(f, "spheroid:{b},{c}"),
            Model::SpheroidCap { b, c, t_max } => write!(f, "spheroid-cap:{b},{c},{t_max}"),
            Model::Bump { height } => write!(f, "bump:{height}"),
            Model::Table { samples } => write!(f, "table[{samples}]"),
            Model::Custom { name } => f.write_str(name),
            Model::Scaled { factor, base } => write!(f, "{base}*{factor}"),
        }
    }
}

type JetFn = Arc<dyn Fn(f64) -> Jet + Send + Sync>;

const PANELS_PER_PIECE: usize = 96;
const GAUSS_POINTS: usize = 12;

/// A validated profile with a cumulative-area table for fast inversion.
#[derive(Clone)]
pub struct Profile {
    model: Model,
    u0: f64,
    u1: f64,
    ends: [EndKind; 2],
    kinks: Vec<f64>,
    jet: JetFn,
    panel_nodes: Vec<f64>,
    cumulative: Vec<f64>,
    rule: GaussRule,
    skip_pole_cells: bool,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile")
            .field("model", &self.model)
            .field("range", &(self.u0, self.u1))
            .field("ends", &self.ends)
            .field("kinks", &self.kinks)
            .finish()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidProfile(format!("{name} must be positive, got {v}")))
    }
}

impl Profile {
    fn build(model: Model, u0: f64, u1: f64, ends: [EndKind; 2], kinks: Vec<f64>, jet: JetFn, extra_nodes: Option<Vec<f64>>) -> Result<Profile> {
        if !(u1 > u0) {
            return Err(Error::InvalidProfile(format!("empty parameter range [{u0}, {u1}]")));
        }
        let mut kinks: Vec<f64> = kinks.into_iter().filter(|k| *k > u0 && *k < u1).collect();
        kinks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        kinks.dedup();
        let mut nodes = vec![u0];
        match &extra_nodes {
            Some(extra) => {
                let mut all: Vec<f64> = extra.iter().copied().chain(kinks.iter().copied()).filter(|x| *x > u0 && *x < u1).collect();
                all.sort_by(|a, b| a.partial_cmp(b).unwrap());
                all.dedup();
                nodes.extend(all);
            }
            None => {
                let mut bounds = vec![u0];
                bounds.extend(kinks.iter().copied());
                bounds.push(u1);
                for w in bounds.windows(2) {
                    for j in 1..PANELS_PER_PIECE {
                        nodes.push(w[0] + (w[1] - w[0]) * j as f64 / PANELS_PER_PIECE as f64);
                    }
                    if w[1] < u1 {
                        nodes.push(w[1]);
                    }
                }
            }
        }
        nodes.push(u1);
        let mut profile = Profile {
            model,
            u0,
            u1,
            ends,
            kinks,
            jet,
            panel_nodes: nodes,
            cumulative: Vec::new(),
            rule: GaussRule::new(GAUSS_POINTS),
            skip_pole_cells: extra_nodes.is_some(),
        };
        profile.validate()?;
        profile.cumulative = profile.cumulative_table();
        Ok(profile)
    }

    fn validate(&self) -> Result<()> {
        for (end, u) in [(self.ends[0], self.u0), (self.ends[1], self.u1)] {
            let j = (self.jet)(u);
            match end {
                EndKind::Pole => {
                    if j.x.abs() > 1e-9 || (j.f_r().abs() - 1.0).abs() > 1e-6 {
                        return Err(Error::InvalidProfile(format!(
                            "pole end at u={u} needs f=0 and |f'|=1, got f={}, f'={}",
                            j.x,
                            j.f_r()
                        )));
                    }
                }
                EndKind::Boundary => {
                    if !(j.x > 0.0) {
                        return Err(Error::InvalidProfile(format!("boundary end at u={u} has f={} <= 0", j.x)));
                    }
                }
            }
        }
        let n = 2000;
        for i in 1..n {
            let u = self.u0 + (self.u1 - self.u0) * i as f64 / n as f64;
            let j = (self.jet)(u);
            if !(j.x > 0.0) || !(j.sigma > 0.0) || !j.x.is_finite() {
                return Err(Error::InvalidProfile(format!("f must be positive inside, got f={} at u={u}", j.x)));
            }
        }
        Ok(())
    }

    fn cumulative_table(&self) -> Vec<f64> {
        let mut cum = vec![0.0];
        let mut acc = 0.0;
        for w in self.panel_nodes.windows(2) {
            acc += self.panel_area(w[0], w[1]);
            cum.push(acc);
        }
        cum
    }

    fn panel_area(&self, a: f64, b: f64) -> f64 {
        self.rule.apply(
            |u| {
                let j = (self.jet)(u);
                2.0 * PI * j.x * j.sigma
            },
            a,
            b,
        )
    }

    /// Round sphere of curvature `k`.
    pub fn sphere(k: f64) -> Result<Profile> {
        positive("curvature", k)?;
        let s = k.sqrt();
        Profile::build(
            Model::Sphere { curvature: k },
            0.0,
            PI / s,
            [EndKind::Pole, EndKind::Pole],
            vec![],
            Arc::new(move |r| Jet::arclength((s * r).sin() / s, (s * r).cos(), -s * (s * r).sin())),
            None,
        )
    }

    /// Geodesic cap of radius `radius` centred at a pole, curvature `k >= 0`.
    pub fn cap(radius: f64, k: f64) -> Result<Profile> {
        positive("radius", radius)?;
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::InvalidProfile(format!("cap curvature must be non-negative, got {k}")));
        }
        let s = k.sqrt();
        if s * radius >= PI {
            return Err(Error::InvalidProfile(format!("cap radius {radius} reaches the antipode")));
        }
        let jet: JetFn = if k == 0.0 {
            Arc::new(|r| Jet::arclength(r, 1.0, 0.0))
        } else {
            Arc::new(move |r| Jet::arclength((s * r).sin() / s, (s * r).cos(), -s * (s * r).sin()))
        };
        Profile::build(Model::Cap { radius, curvature: k }, 0.0, radius, [EndKind::Pole, EndKind::Boundary], vec![], jet, None)
    }

    /// Flat tube of constant radius.
    pub fn tube(radius: f64, length: f64) -> Result<Profile> {
        positive("radius", radius)?;
        positive("length", length)?;
        Profile::build(
            Model::Tube { radius, length },
            0.0,
            length,
            [EndKind::Boundary, EndKind::Boundary],
            vec![],
            Arc::new(move |_| Jet::arclength(radius, 0.0, 0.0)),
            None,
        )
    }

    /// The flat cylinder `S^1 x [-M, M]` scaled by `c` (radius `c`, length `2 M c`).
    pub fn flat_cylinder(modulus: f64, c: f64) -> Result<Profile> {
        positive("modulus", modulus)?;
        Profile::tube(c, 2.0 * modulus * c)
    }

    fn cigar_jet(length: f64) -> JetFn {
        Arc::new(move |r| {
            if r <= PI / 2.0 {
                Jet::arclength(r.sin(), r.cos(), -r.sin())
            } else if r <= PI / 2.0 + length {
                Jet::arclength(1.0, 0.0, 0.0)
            } else {
                let t = r - PI / 2.0 - length;
                Jet::arclength(t.cos(), -t.sin(), -t.cos())
            }
        })
    }

    /// Closed cigar: unit hemispheres glued to a unit cylinder of length `length`.
    pub fn cigar(length: f64) -> Result<Profile> {
        if !(length >= 0.0 && length.is_finite()) {
            return Err(Error::InvalidProfile(format!("cigar length must be non-negative, got {length}")));
        }
        Profile::build(
            Model::Cigar { length },
            0.0,
            PI + length,
            [EndKind::Pole, EndKind::Pole],
            vec![PI / 2.0, PI / 2.0 + length],
            Profile::cigar_jet(length),
            None,
        )
    }

    /// One unit hemisphere followed by a unit cylinder of length `length`.
    pub fn capped_cigar(length: f64) -> Result<Profile> {
        if !(length >= 0.0 && length.is_finite()) {
            return Err(Error::InvalidProfile(format!("cylinder length must be non-negative, got {length}")));
        }
        Profile::build(
            Model::CappedCigar { length },
            0.0,
            PI / 2.0 + length,
            [EndKind::Pole, EndKind::Boundary],
            vec![PI / 2.0],
            Profile::cigar_jet(length),
            None,
        )
    }

    fn spheroid_jet(b: f64, c: f64) -> JetFn {
        Arc::new(move |t: f64| {
            let (s, co) = t.sin_cos();
            let sigma = (b * b * co * co + c * c * s * s).sqrt();
            Jet {
                x: b * s,
                x_u: b * co,
                x_uu: -b * s,
                sigma,
                sigma_u: (c * c - b * b) * s * co / sigma,
            }
        })
    }

    /// Spheroid `x = b sin t, z = -c cos t`.
    pub fn spheroid(b: f64, c: f64) -> Result<Profile> {
        positive("b", b)?;
        positive("c", c)?;
        Profile::build(Model::Spheroid { b, c }, 0.0, PI, [EndKind::Pole, EndKind::Pole], vec![], Profile::spheroid_jet(b, c), None)
    }

    /// Spheroid cut at polar angle `t_max`.
    pub fn spheroid_cap(b: f64, c: f64, t_max: f64) -> Result<Profile> {
        positive("b", b)?;
        positive("c", c)?;
        if !(t_max > 0.0 && t_max < PI) {
            return Err(Error::InvalidProfile(format!("spheroid cap angle must lie in (0, pi), got {t_max}")));
        }
        Profile::build(
            Model::SpheroidCap { b, c, t_max },
            0.0,
            t_max,
            [EndKind::Pole, EndKind::Boundary],
            vec![],
            Profile::spheroid_jet(b, c),
            None,
        )
    }

    /// Annulus `f = 1 + h r (1 - r)` on `[0, 1]`.
    pub fn bump(height: f64) -> Result<Profile> {
        if !(height > -4.0 && height.is_finite()) {
            return Err(Error::InvalidProfile(format!("bump height must exceed -4, got {height}")));
        }
        Profile::build(
            Model::Bump { height },
            0.0,
            1.0,
            [EndKind::Boundary, EndKind::Boundary],
            vec![],
            Arc::new(move |r| Jet::arclength(1.0 + height * r * (1.0 - r), height * (1.0 - 2.0 * r), -2.0 * height)),
            None,
        )
    }

    /// Closed-form profile `r -> (f, f', f'')` on `[0, length]`.
    pub fn from_fn<F>(name: &str, length: f64, ends: [EndKind; 2], kinks: Vec<f64>, f: F) -> Result<Profile>
    where
        F: Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static,
    {
        positive("length", length)?;
        Profile::build(
            Model::Custom { name: name.to_string() },
            0.0,
            length,
            ends,
            kinks,
            Arc::new(move |r| {
                let (v, d, dd) = f(r);
                Jet::arclength(v, d, dd)
            }),
            None,
        )
    }

    /// Sampled profile `(r_i, f_i)` with monotone cubic interpolation.
    /// An end whose sample is zero is an axis pole; its slope is set to `+-1`.
    pub fn table(r: Vec<f64>, f: Vec<f64>) -> Result<Profile> {
        if r.len() < 64 || r.len() != f.len() {
            return Err(Error::InvalidProfile(format!("a profile table needs at least 64 samples, got {}", r.len())));
        }
        let n = r.len();
        let left = if f[0] == 0.0 { EndKind::Pole } else { EndKind::Boundary };
        let right = if f[n - 1] == 0.0 { EndKind::Pole } else { EndKind::Boundary };
        if f.iter().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidProfile("profile samples must be non-negative".into()));
        }
        let (r0, r1) = (r[0], r[n - 1]);
        let spline = Pchip::new(r.clone(), f)
            .map_err(|e| Error::InvalidProfile(e.to_string()))?
            .with_end_slopes((left == EndKind::Pole).then_some(1.0), (right == EndKind::Pole).then_some(-1.0));
        Profile::build(
            Model::Table { samples: n },
            r0,
            r1,
            [left, right],
            vec![],
            Arc::new(move |t| {
                let (v, d, dd) = spline.eval3(t);
                Jet::arclength(v, d, dd)
            }),
            Some(r),
        )
    }

    /// Homothety by `c`: lengths scale by `c`, areas by `c^2`, curvature by `c^-2`.
    pub fn scaled(&self, c: f64) -> Result<Profile> {
        positive("scale factor", c)?;
        if c == 1.0 {
            return Ok(self.clone());
        }
        let base = self.jet.clone();
        let mut p = Profile {
            model: Model::Scaled {
                factor: c,
                base: Box::new(self.model.clone()),
            },
            jet: Arc::new(move |u| base(u).scaled(c)),
            cumulative: Vec::new(),
            ..self.clone()
        };
        p.cumulative = p.cumulative_table();
        Ok(p)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn ends(&self) -> [EndKind; 2] {
        self.ends
    }

    pub fn parameter_range(&self) -> (f64, f64) {
        (self.u0, self.u1)
    }

    /// Interior parameter values where the profile is only piecewise smooth.
    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn jet(&self, u: f64) -> Jet {
        (self.jet)(u)
    }

    pub fn is_closed(&self) -> bool {
        self.ends == [EndKind::Pole, EndKind::Pole]
    }

    /// Total meridian length `L`.
    pub fn length(&self) -> Result<f64> {
        quad::integrate(|u| (self.jet)(u).sigma, self.u0, self.u1, &self.kinks, 1e-12)
    }

    /// Arclength `r(u)` from the left end.
    pub fn arclength_at(&self, u: f64) -> Result<f64> {
        quad::integrate(|v| (self.jet)(v).sigma, self.u0, u, &self.kinks, 1e-12)
    }

    /// Area `int 2 pi f dr` by adaptive quadrature.
    pub fn area(&self) -> Result<f64> {
        quad::integrate(
            |u| {
                let j = (self.jet)(u);
                2.0 * PI * j.x * j.sigma
            },
            self.u0,
            self.u1,
            &self.kinks,
            1e-11,
        )
    }

    /// Total area from the panel table.
    pub fn panel_area_total(&self) -> f64 {
        *self.cumulative.last().expect("non-empty table")
    }

    fn panel_of(&self, u: f64) -> usize {
        let n = self.panel_nodes.len();
        match self.panel_nodes.binary_search_by(|v| v.partial_cmp(&u).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Area enclosed between the left end and the parallel at `u`.
    pub fn area_at(&self, u: f64) -> f64 {
        let i = self.panel_of(u);
        self.cumulative[i] + self.panel_area(self.panel_nodes[i], u)
    }

    /// Area between the parallel at `u` and the right end.
    pub fn area_after(&self, u: f64) -> f64 {
        let i = self.panel_of(u);
        let total = self.panel_area_total();
        (total - self.cumulative[i + 1]) + self.panel_area(u, self.panel_nodes[i + 1])
    }

    /// Parameter of the parallel enclosing area `a` (measured from the left end).
    pub fn u_at_area(&self, a: f64) -> Result<f64> {
        let total = self.panel_area_total();
        if !(0.0..=total).contains(&a) {
            return Err(Error::InvalidArgument(format!("area {a} outside [0, {total}]")));
        }
        if a <= 0.5 * total {
            let i = match self.cumulative.binary_search_by(|v| v.partial_cmp(&a).unwrap()) {
                Ok(i) => return Ok(self.panel_nodes[i]),
                Err(i) => i - 1,
            };
            let (lo, hi) = (self.panel_nodes[i], self.panel_nodes[i + 1]);
            let base = self.cumulative[i];
            let d = brent(0.0, hi - lo, |d| base + self.panel_area(lo, lo + d) - a, 1e-14, 1e-300)?;
            Ok(lo + d)
        } else {
            let rest = total - a;
            let from_right: Vec<f64> = self.cumulative.iter().map(|c| total - c).collect();
            let i = match from_right.binary_search_by(|v| rest.partial_cmp(v).unwrap()) {
                Ok(i) => return Ok(self.panel_nodes[i]),
                Err(i) => i,
            };
            let (lo, hi) = (self.panel_nodes[i - 1], self.panel_nodes[i]);
            let base = from_right[i];
            let d = brent(0.0, hi - lo, |d| base + self.panel_area(hi - d, hi) - rest, 1e-14, 1e-300)?;
            Ok(hi - d)
        }
    }

    /// Parameter values at which curvature is sampled: interior points of
    /// every smooth piece, approaching the piece ends from inside.
    pub fn curvature_grid(&self, per_piece: usize) -> Vec<f64> {
        let mut bounds = vec![self.u0];
        bounds.extend(self.kinks.iter().copied());
        bounds.push(self.u1);
        let mut grid = Vec::new();
        for w in bounds.windows(2) {
            let (a, b) = (w[0], w[1]);
            let width = b - a;
            grid.push(a + 1e-9 * width);
            for j in 1..per_piece {
                grid.push(a + width * j as f64 / per_piece as f64);
            }
            grid.push(b - 1e-9 * width);
        }
        if self.skip_pole_cells {
            let knots = &self.panel_nodes;
            let lo = if self.ends[0] == EndKind::Pole { knots[1] } else { self.u0 };
            let hi = if self.ends[1] == EndKind::Pole { knots[knots.len() - 2] } else { self.u1 };
            grid.retain(|u| *u >= lo && *u <= hi);
        }
        grid
    }

    /// Samples `(r, f)` at `n + 1` parameter values.
    pub fn samples(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut r = 0.0;
        let mut prev = self.u0;
        for i in 0..=n {
            let u = self.u0 + (self.u1 - self.u0) * i as f64 / n as f64;
            r += quad::integrate(|v| (self.jet)(v).sigma, prev, u, &self.kinks, 1e-13)?;
            prev = u;
            out.push((r, (self.jet)(u).x.max(0.0)));
        }
        Ok(out)
    }

    /// Parses a model description such as `sphere`, `cap:1.2,1`, `cigar:3`,
    /// `cylinder:1`, `tube:0.5,2`, `spheroid:1.2,1.44`, `spheroid-cap:1.2,1,1.5`,
    /// `capped-cigar:2`, `bump:0.5`, `disk:1`.
    pub fn from_spec(spec: &str) -> Result<Profile> {
        let spec = spec.trim();
        let (name, args) = match spec.split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => (spec, ""),
        };
        let nums: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|t| parse_number(t.trim()))
                .collect::<Result<Vec<f64>>>()?
        };
        let arity = |lo: usize, hi: usize| -> Result<()> {
            if nums.len() < lo || nums.len() > hi {
                Err(Error::InvalidProfile(format!("model `{name}` takes {lo}..={hi} parameters, got {}", nums.len())))
            } else {
                Ok(())
            }
        };
        match name {
            "sphere" => {
                arity(0, 1)?;
                Profile::sphere(nums.first().copied().unwrap_or(1.0))
            }
            "cap" => {
                arity(1, 2)?;
                Profile::cap(nums[0], nums.get(1).copied().unwrap_or(1.0))
            }
            "disk" => {
                arity(1, 1)?;
                Profile::cap(nums[0], 0.0)
            }
            "hemisphere" => {
                arity(0, 0)?;
                Profile::cap(PI / 2.0, 1.0)
            }
            "cigar" => {
                arity(1, 1)?;
                Profile::cigar(nums[0])
            }
            "capped-cigar" => {
                arity(1, 1)?;
                Profile::capped_cigar(nums[0])
            }
            "cylinder" => {
                arity(1, 2)?;
                Profile::flat_cylinder(nums[0], nums.get(1).copied().unwrap_or(1.0))
            }
            "tube" => {
                arity(2, 2)?;
                Profile::tube(nums[0], nums[1])
            }
            "spheroid" => {
                arity(2, 2)?;
                Profile::spheroid(nums[0], nums[1])
            }
            "spheroid-cap" => {
                arity(3, 3)?;
                Profile::spheroid_cap(nums[0], nums[1], nums[2])
            }
            "bump" => {
                arity(1, 1)?;
                Profile::bump(nums[0])
            }
            _ => Err(Error::InvalidProfile(format!("unknown model `{spec}`"))),
        }
    }

    /// Parses the profile file format: a first line holding a model
    /// description or `table`, followed (for tables) by `r,f` rows.
    pub fn parse_file(text: &str) -> Result<Profile> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty profile file".into(),
        })?;
        if header != "table" {
            return Profile::from_spec(header);
        }
        let mut r = Vec::new();
        let mut f = Vec::new();
        for (line, row) in lines {
            let (a, b) = row.split_once(',').ok_or(Error::Parse {
                line,
                message: format!("expected `r,f`, got `{row}`"),
            })?;
            let parse = |t: &str| {
                t.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("{e}: `{t}`"),
                })
            };
            r.push(parse(a)?);
            f.push(parse(b)?);
        }
        Profile::table(r, f)
    }
}

/// Parses a real number, also accepting `pi`, `2pi`, `pi/2` style values.
pub fn parse_number(text: &str) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase();
    let bad = || Error::InvalidArgument(format!("invalid number `{text}`"));
    if let Some((a, b)) = t.split_once('/') {
        let num = parse_number(a)?;
        let den = parse_number(b)?;
        if den == 0.0 {
            return Err(bad());
        }
        return Ok(num / den);
    }
    if let Some(coef) = t.strip_suffix("pi") {
        let c = match coef.trim_end_matches('*') {
            "" => 1.0,
            "-" => -1.0,
            s => s.parse::<f64>().map_err(|_| bad())?,
        };
        return Ok(c * PI);
    }
    let v = t.parse::<f64>().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}
