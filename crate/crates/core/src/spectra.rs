//! Closed-form magnetic spectra of the round sphere with antipodal poles,
//! the punctured hemisphere (Dirichlet or Neumann), and the flat cylinder.
//!
//! Sphere-family eigenvalues are `alpha (alpha + 1)` for a degree `alpha`
//! that is an integer shift of `nu`; lines are merged by comparing `alpha`
//! exactly when the flux is rational. Cylinder eigenvalues are
//! `|n - nu|^2 + k^2 pi^2 / (4 M^2)`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::{Flux, Rational, Scalar};

/// Relative tolerance used to merge lines when the flux is not rational.
pub const MERGE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HemisphereBc {
    Dirichlet,
    Neumann,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "geometry", rename_all = "lowercase")]
pub enum Geometry {
    Sphere { curvature: f64 },
    Hemisphere { bc: HemisphereBc },
    Cylinder { modulus: f64 },
}

/// Symbolic form of an eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Symbol {
    /// `alpha (alpha + 1)`, scaled by the curvature.
    Degree { alpha: Scalar },
    /// `shift^2 + k^2 pi^2 / (4 M^2)` with `shift = |n - nu|`.
    Cylinder { shift: Scalar, k: u64 },
}

impl Symbol {
    pub fn alpha(&self) -> Option<Scalar> {
        match self {
            Symbol::Degree { alpha } => Some(*alpha),
            Symbol::Cylinder { .. } => None,
        }
    }

    fn same_as(&self, other: &Symbol) -> bool {
        match (self, other) {
            (Symbol::Degree { alpha: a }, Symbol::Degree { alpha: b }) => a.same_as(*b, MERGE_TOLERANCE),
            (Symbol::Cylinder { shift: s, k }, Symbol::Cylinder { shift: t, k: j }) => {
                k == j && s.same_as(*t, MERGE_TOLERANCE)
            }
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Symbol::Degree { alpha } => alpha.to_string(),
            Symbol::Cylinder { shift, k } => format!("shift={shift};k={k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumLine {
    pub value: f64,
    pub multiplicity: u64,
    pub branch_n: i64,
    pub branch_k: u64,
    pub symbol: Symbol,
}

/// One serialized spectrum record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRecord {
    pub value: f64,
    pub multiplicity: u64,
    pub branch_n: i64,
    pub branch_k: u64,
    pub symbolic_alpha: String,
}

impl SpectrumLine {
    pub fn record(&self) -> SpectrumRecord {
        SpectrumRecord {
            value: self.value,
            multiplicity: self.multiplicity,
            branch_n: self.branch_n,
            branch_k: self.branch_k,
            symbolic_alpha: self.symbol.describe(),
        }
    }
}

/// The first `count` eigenvalues (with multiplicity) of a model geometry.
///
/// Lines are strictly increasing in value. When the truncation falls inside
/// a multiple eigenvalue, the whole eigenvalue is kept, so the multiplicities
/// sum to at least the requested count.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub geometry: Geometry,
    pub flux: Flux,
    pub lines: Vec<SpectrumLine>,
    /// Set when lines were merged with a floating tolerance rather than exactly.
    pub approximate: bool,
}

impl Spectrum {
    pub fn total(&self) -> u64 {
        self.lines.iter().map(|l| l.multiplicity).sum()
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn values(&self) -> Vec<f64> {
        self.lines
            .iter()
            .flat_map(|l| std::iter::repeat(l.value).take(l.multiplicity as usize))
            .collect()
    }

    pub fn first(&self) -> Option<&SpectrumLine> {
        self.lines.first()
    }

    pub fn records(&self) -> Vec<SpectrumRecord> {
        self.lines.iter().map(SpectrumLine::record).collect()
    }
}

fn degree_value(alpha: Scalar) -> f64 {
    if let Scalar::Exact(q) = alpha {
        if let Some(p) = q.numer().checked_mul(q.numer() + q.denom()) {
            if let Some(d) = q.denom().checked_mul(*q.denom()) {
                return Rational::new(p, d).to_f64().unwrap_or(f64::NAN);
            }
        }
    }
    let a = alpha.to_f64();
    a * (a + 1.0)
}

fn cmp_scalar(a: Scalar, b: Scalar) -> Ordering {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x.cmp(&y),
        _ => a.to_f64().partial_cmp(&b.to_f64()).unwrap_or(Ordering::Equal),
    }
}

/// A monotone sequence of degrees: the `j`-th member has branch index `n(j)`,
/// degree `alpha(n)` and multiplicity `mult(n)` (zero means absent).
struct Branch<'a> {
    n_of: Box<dyn Fn(i64) -> i64 + 'a>,
    alpha: Box<dyn Fn(i64) -> Scalar + 'a>,
    mult: Box<dyn Fn(i64) -> u64 + 'a>,
}

fn ascending(start: i64) -> Box<dyn Fn(i64) -> i64> {
    Box::new(move |j| start + j)
}

fn descending() -> Box<dyn Fn(i64) -> i64> {
    Box::new(|j| -j)
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    Ok(())
}

/// Enumerates the branches until `count` eigenvalues below a certified cutoff
/// are available, then sorts, merges and truncates.
fn collect_degrees(branches: &[Branch<'_>], count: usize, scale: f64) -> (Vec<SpectrumLine>, bool) {
    let mut depth: i64 = 8;
    loop {
        let cutoff = branches
            .iter()
            .map(|b| (b.alpha)((b.n_of)(depth)))
            .min_by(|a, b| cmp_scalar(*a, *b))
            .expect("at least one branch");
        let mut raw: Vec<(Scalar, u64, i64)> = Vec::new();
        for b in branches {
            for j in 0..depth {
                let n = (b.n_of)(j);
                let m = (b.mult)(n);
                let alpha = (b.alpha)(n);
                if m > 0 && cmp_scalar(alpha, cutoff) == Ordering::Less {
                    raw.push((alpha, m, n));
                }
            }
        }
        raw.sort_by(|a, b| cmp_scalar(a.0, b.0).then(a.2.abs().cmp(&b.2.abs())).then(b.2.cmp(&a.2)));
        let mut lines: Vec<SpectrumLine> = Vec::new();
        let mut approximate = false;
        for (alpha, m, n) in raw {
            approximate |= !alpha.is_exact();
            let symbol = Symbol::Degree { alpha };
            match lines.last_mut() {
                Some(last) if last.symbol.same_as(&symbol) => {
                    last.multiplicity += m;
                }
                _ => lines.push(SpectrumLine {
                    value: scale * degree_value(alpha),
                    multiplicity: m,
                    branch_n: n,
                    branch_k: 0,
                    symbol,
                }),
            }
        }
        if lines.iter().map(|l| l.multiplicity).sum::<u64>() >= count as u64 {
            truncate(&mut lines, count);
            return (lines, approximate);
        }
        depth *= 2;
    }
}

fn truncate(lines: &mut Vec<SpectrumLine>, count: usize) {
    let mut covered = 0;
    let keep = lines
        .iter()
        .take_while(|l| {
            let take = covered < count as u64;
            covered += l.multiplicity;
            take
        })
        .count();
    lines.truncate(keep);
}

/// Magnetic spectrum of the sphere of curvature `curvature` with antipodal
/// poles: the first `count` eigenvalues with multiplicity.
pub fn sphere_spectrum(flux: Flux, curvature: f64, count: usize) -> Result<Spectrum> {
    check_count(count)?;
    if !(curvature > 0.0 && curvature.is_finite()) {
        return Err(Error::InvalidArgument(format!("curvature must be positive, got {curvature}")));
    }
    let nu = flux.reduced();
    let branches: Vec<Branch<'_>> = if flux.is_integer() {
        // Laplace-Beltrami: l (l + 1) with multiplicity 2l + 1.
        vec![Branch {
            n_of: ascending(0),
            alpha: Box::new(|n| Scalar::Exact(Rational::from_integer(n))),
            mult: Box::new(|n| (2 * n + 1) as u64),
        }]
    } else if flux.is_half() {
        vec![Branch {
            n_of: ascending(1),
            alpha: Box::new(move |n| nu.sub_from_int(n).abs()),
            mult: Box::new(|n| (2 * n) as u64),
        }]
    } else {
        vec![
            Branch {
                n_of: ascending(1),
                alpha: Box::new(move |n| nu.sub_from_int(n)),
                mult: Box::new(|n| n as u64),
            },
            Branch {
                n_of: descending(),
                alpha: Box::new(move |n| nu.add_int(n.abs())),
                mult: Box::new(|n| (n.abs() + 1) as u64),
            },
        ]
    };
    let (lines, approximate) = collect_degrees(&branches, count, curvature);
    Ok(Spectrum {
        geometry: Geometry::Sphere { curvature },
        flux,
        lines,
        approximate,
    })
}

fn half_up(m: i64) -> u64 {
    (m / 2) as u64
}

/// Spectrum of the unit hemisphere with the pole at its centre, under
/// magnetic Dirichlet or Neumann conditions on the equator.
pub fn hemisphere_spectrum(flux: Flux, bc: HemisphereBc, count: usize) -> Result<Spectrum> {
    check_count(count)?;
    let nu = flux.reduced();
    let odd = |n: i64| n.rem_euclid(2) == 1;
    let branches: Vec<Branch<'_>> = if flux.is_integer() {
        match bc {
            HemisphereBc::Dirichlet => vec![Branch {
                n_of: ascending(1),
                alpha: Box::new(|n| Scalar::Exact(Rational::from_integer(n))),
                mult: Box::new(|n| n as u64),
            }],
            HemisphereBc::Neumann => vec![Branch {
                n_of: ascending(0),
                alpha: Box::new(|n| Scalar::Exact(Rational::from_integer(n))),
                mult: Box::new(|n| (n + 1) as u64),
            }],
        }
    } else if flux.is_half() {
        let mult: Box<dyn Fn(i64) -> u64> = match bc {
            HemisphereBc::Dirichlet => Box::new(move |n| if odd(n) { (n - 1) as u64 } else { n as u64 }),
            HemisphereBc::Neumann => Box::new(move |n| if odd(n) { (n + 1) as u64 } else { n as u64 }),
        };
        vec![Branch {
            n_of: ascending(1),
            alpha: Box::new(move |n| nu.sub_from_int(n).abs()),
            mult,
        }]
    } else {
        let (pos, neg): (Box<dyn Fn(i64) -> u64>, Box<dyn Fn(i64) -> u64>) = match bc {
            HemisphereBc::Dirichlet => (
                Box::new(move |n| if odd(n) { half_up(n - 1) } else { half_up(n) }),
                Box::new(move |n| {
                    let m = n.abs();
                    if odd(m) {
                        half_up(m + 1)
                    } else {
                        half_up(m)
                    }
                }),
            ),
            HemisphereBc::Neumann => (
                Box::new(move |n| if odd(n) { half_up(n + 1) } else { half_up(n) }),
                Box::new(move |n| {
                    let m = n.abs();
                    if odd(m) {
                        half_up(m + 1)
                    } else {
                        half_up(m + 2)
                    }
                }),
            ),
        };
        vec![
            Branch {
                n_of: ascending(1),
                alpha: Box::new(move |n| nu.sub_from_int(n)),
                mult: pos,
            },
            Branch {
                n_of: descending(),
                alpha: Box::new(move |n| nu.add_int(n.abs())),
                mult: neg,
            },
        ]
    };
    let (lines, approximate) = collect_degrees(&branches, count, 1.0);
    Ok(Spectrum {
        geometry: Geometry::Hemisphere { bc },
        flux,
        lines,
        approximate,
    })
}

/// Neumann magnetic spectrum of the flat cylinder `S^1 x [-M, M]`.
pub fn cylinder_spectrum(flux: Flux, modulus: f64, count: usize) -> Result<Spectrum> {
    check_count(count)?;
    if !(modulus > 0.0 && modulus.is_finite()) {
        return Err(Error::InvalidArgument(format!("modulus must be positive, got {modulus}")));
    }
    let nu = flux.reduced();
    let nu_f = nu.to_f64();
    let axial = PI / (2.0 * modulus);
    let mut cutoff = nu_f * nu_f + (count as f64).sqrt() * (1.0 + axial * axial);
    loop {
        let n_max = (cutoff.sqrt() + nu_f).ceil() as i64 + 1;
        let k_max = (cutoff.sqrt() / axial).floor() as u64;
        let mut raw: Vec<SpectrumLine> = Vec::new();
        for n in -n_max..=n_max {
            let shift = nu.sub_from_int(n).abs();
            let s = shift.to_f64();
            for k in 0..=k_max {
                let kk = k as f64 * axial;
                let value = s * s + kk * kk;
                if value <= cutoff {
                    raw.push(SpectrumLine {
                        value,
                        multiplicity: 1,
                        branch_n: n,
                        branch_k: k,
                        symbol: Symbol::Cylinder { shift, k },
                    });
                }
            }
        }
        if raw.len() >= count {
            raw.sort_by(|a, b| {
                a.value
                    .partial_cmp(&b.value)
                    .unwrap_or(Ordering::Equal)
                    .then(a.branch_k.cmp(&b.branch_k))
                    .then(a.branch_n.abs().cmp(&b.branch_n.abs()))
                    .then(b.branch_n.cmp(&a.branch_n))
            });
            let mut lines: Vec<SpectrumLine> = Vec::new();
            let mut approximate = !flux.is_exact();
            for line in raw {
                match lines.last_mut() {
                    Some(last) if last.symbol.same_as(&line.symbol) => last.multiplicity += 1,
                    Some(last)
                        if (last.value - line.value).abs()
                            <= MERGE_TOLERANCE * last.value.abs().max(line.value.abs()).max(1.0) =>
                    {
                        approximate = true;
                        last.multiplicity += 1;
                    }
                    _ => lines.push(line),
                }
            }
            truncate(&mut lines, count);
            return Ok(Spectrum {
                geometry: Geometry::Cylinder { modulus },
                flux,
                lines,
                approximate,
            });
        }
        cutoff *= 2.0;
    }
}

/// Outcome of comparing the sphere spectrum with the union of the hemisphere
/// Dirichlet and Neumann spectra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub pass: bool,
    pub count: usize,
    pub mismatches: Vec<String>,
    /// Set when the comparison had to use a floating tolerance.
    pub approximate: bool,
}

/// Checks that the first `count` sphere eigenvalues coincide, as a multiset,
/// with the first `count` members of the merged hemisphere spectra.
pub fn sphere_decomposition_check(flux: Flux, count: usize) -> DecompositionReport {
    let mut mismatches = Vec::new();
    let run = || -> Result<(Spectrum, Spectrum, Spectrum)> {
        Ok((
            sphere_spectrum(flux, 1.0, count)?,
            hemisphere_spectrum(flux, HemisphereBc::Dirichlet, count)?,
            hemisphere_spectrum(flux, HemisphereBc::Neumann, count)?,
        ))
    };
    let (sphere, dir, neu) = match run() {
        Ok(v) => v,
        Err(e) => {
            return DecompositionReport {
                pass: false,
                count,
                mismatches: vec![e.to_string()],
                approximate: false,
            }
        }
    };
    let mut union: Vec<SpectrumLine> = dir.lines.iter().chain(neu.lines.iter()).copied().collect();
    union.sort_by(|a, b| {
        cmp_scalar(
            a.symbol.alpha().expect("degree line"),
            b.symbol.alpha().expect("degree line"),
        )
    });
    let mut merged: Vec<SpectrumLine> = Vec::new();
    for line in union {
        match merged.last_mut() {
            Some(last) if last.symbol.same_as(&line.symbol) => last.multiplicity += line.multiplicity,
            _ => merged.push(line),
        }
    }
    truncate(&mut merged, count);

    let len = sphere.lines.len().max(merged.len());
    for i in 0..len {
        match (sphere.lines.get(i), merged.get(i)) {
            (Some(s), Some(h)) => {
                if !s.symbol.same_as(&h.symbol) || s.multiplicity != h.multiplicity {
                    mismatches.push(format!(
                        "line {i}: sphere alpha={} x{} vs hemispheres alpha={} x{}",
                        s.symbol.describe(),
                        s.multiplicity,
                        h.symbol.describe(),
                        h.multiplicity
                    ));
                }
            }
            (Some(s), None) => mismatches.push(format!("line {i}: sphere alpha={} has no counterpart", s.symbol.describe())),
            (None, Some(h)) => mismatches.push(format!("line {i}: hemisphere alpha={} has no counterpart", h.symbol.describe())),
            (None, None) => {}
        }
    }
    DecompositionReport {
        pass: mismatches.is_empty(),
        count,
        mismatches,
        approximate: sphere.approximate || dir.approximate || neu.approximate || !flux.is_exact(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn sphere_head_at_three_tenths() {
        let s = sphere_spectrum(Flux::rational(3, 10).unwrap(), 1.0, 6).unwrap();
        let v = s.values();
        let expected = [0.39, 1.19, 2.99, 2.99, 4.59, 4.59];
        assert_eq!(v.len(), 6);
        for (a, b) in v.iter().zip(expected) {
            assert!(close(*a, b), "{a} vs {b}");
        }
        assert_eq!(s.lines[2].multiplicity, 2);
    }

    #[test]
    fn sphere_half_flux_is_double() {
        let s = sphere_spectrum(Flux::rational(1, 2).unwrap(), 1.0, 2).unwrap();
        assert_eq!(s.lines.len(), 1);
        assert!(close(s.lines[0].value, 0.75));
        assert_eq!(s.lines[0].multiplicity, 2);
    }

    #[test]
    fn sphere_integer_flux_is_laplace_beltrami() {
        let s = sphere_spectrum(Flux::rational(3, 1).unwrap(), 1.0, 9).unwrap();
        let got: Vec<(f64, u64)> = s.lines.iter().map(|l| (l.value, l.multiplicity)).collect();
        assert_eq!(got, vec![(0.0, 1), (2.0, 3), (6.0, 5)]);
    }

    #[test]
    fn truncation_keeps_whole_last_eigenvalue() {
        let s = sphere_spectrum(Flux::rational(3, 10).unwrap(), 1.0, 3).unwrap();
        assert_eq!(s.total(), 4);
        assert_eq!(s.lines.last().unwrap().multiplicity, 2);
        let h = hemisphere_spectrum(Flux::rational(1, 2).unwrap(), HemisphereBc::Neumann, 1).unwrap();
        assert_eq!((h.lines.len(), h.lines[0].multiplicity), (1, 2));
    }

    #[test]
    fn hemisphere_heads() {
        let d = hemisphere_spectrum(Flux::rational(3, 10).unwrap(), HemisphereBc::Dirichlet, 1).unwrap();
        assert!(close(d.lines[0].value, 2.99));
        assert_eq!(d.lines[0].branch_n, -1);
        let n = hemisphere_spectrum(Flux::rational(3, 10).unwrap(), HemisphereBc::Neumann, 1).unwrap();
        assert!(close(n.lines[0].value, 0.39));
        let h = hemisphere_spectrum(Flux::rational(1, 2).unwrap(), HemisphereBc::Neumann, 2).unwrap();
        assert!(close(h.lines[0].value, 0.75));
        assert_eq!(h.lines[0].multiplicity, 2);
    }

    #[test]
    fn hemisphere_omits_zero_multiplicity_lines() {
        let d = hemisphere_spectrum(Flux::rational(3, 10).unwrap(), HemisphereBc::Dirichlet, 40).unwrap();
        assert!(d.lines.iter().all(|l| l.multiplicity > 0));
        assert!(!d.lines.iter().any(|l| close(l.value, 0.7 * 1.7)));
    }

    #[test]
    fn cylinder_head() {
        let c = cylinder_spectrum(Flux::rational(1, 4).unwrap(), 1.0, 2).unwrap();
        assert_eq!(c.lines[0].value, 0.0625);
        assert!(close(c.lines[1].value, 0.5625));
        assert_eq!((c.lines[1].branch_n, c.lines[1].branch_k), (1, 0));
        let z = cylinder_spectrum(Flux::rational(0, 1).unwrap(), 3.0, 1).unwrap();
        assert_eq!(z.lines[0].value, 0.0);
    }

    #[test]
    fn decomposition_examples() {
        for (p, q, count) in [(3, 10, 20), (1, 2, 20), (3, 10, 1), (0, 1, 30)] {
            let r = sphere_decomposition_check(Flux::rational(p, q).unwrap(), count);
            assert!(r.pass, "{p}/{q}: {:?}", r.mismatches);
        }
    }

    #[test]
    fn invalid_arguments() {
        let f = Flux::rational(1, 3).unwrap();
        assert!(sphere_spectrum(f, 1.0, 0).is_err());
        assert!(sphere_spectrum(f, -1.0, 3).is_err());
        assert!(cylinder_spectrum(f, 0.0, 3).is_err());
    }
}
