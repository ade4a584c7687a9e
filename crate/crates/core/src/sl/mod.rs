//! The reduced problem `-(G f')' + (4 pi^2 nu^2 / G) f = kappa f` on `(0, M)`.

pub mod engine;
pub mod fem;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::Flux;
use crate::weight::{Weight, WeightEnd};

use engine::{sign_changes, End, PoleBranch, SturmProblem, POLE_OFFSET};

/// Samples per side of the matching point in returned eigenfunctions.
pub const SAMPLES_PER_SIDE: usize = 400;
/// Elements of the fine oracle mesh.
pub const ORACLE_ELEMENTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bc {
    /// `G f' -> 0` at a pole end.
    SingularNeumann,
    /// `f' = 0` at a regular end.
    RegularNeumann,
    /// `f = 0`.
    Dirichlet,
}

impl fmt::Display for Bc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bc::SingularNeumann => "singular-neumann",
            Bc::RegularNeumann => "regular-neumann",
            Bc::Dirichlet => "dirichlet",
        })
    }
}

impl Bc {
    /// Natural condition for an end kind.
    pub fn natural(end: WeightEnd) -> Bc {
        match end {
            WeightEnd::Pole => Bc::SingularNeumann,
            WeightEnd::Regular => Bc::RegularNeumann,
        }
    }

    pub fn parse(text: &str) -> Result<Bc> {
        match text {
            "singular-neumann" => Ok(Bc::SingularNeumann),
            "regular-neumann" => Ok(Bc::RegularNeumann),
            "neumann" => Ok(Bc::RegularNeumann),
            "dirichlet" => Ok(Bc::Dirichlet),
            _ => Err(Error::InvalidArgument(format!("unknown boundary condition `{text}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SlProblem {
    pub weight: Weight,
    pub flux: Flux,
    pub left: Bc,
    pub right: Bc,
    /// Relative distance from a pole at which integration starts.
    pub offset: f64,
}

impl SlProblem {
    pub fn new(weight: Weight, flux: Flux, left: Bc, right: Bc) -> Result<SlProblem> {
        for (bc, end, side) in [(left, weight.left(), "left"), (right, weight.right(), "right")] {
            let ok = match end {
                WeightEnd::Pole => bc != Bc::RegularNeumann,
                WeightEnd::Regular => bc != Bc::SingularNeumann,
            };
            if !ok {
                return Err(Error::IncompatibleBoundary {
                    condition: bc.to_string(),
                    end: format!("{side} {end}"),
                });
            }
        }
        Ok(SlProblem {
            weight,
            flux,
            left,
            right,
            offset: POLE_OFFSET,
        })
    }

    /// Natural conditions inferred from the weight's end kinds.
    pub fn natural(weight: Weight, flux: Flux) -> SlProblem {
        let (l, r) = (Bc::natural(weight.left()), Bc::natural(weight.right()));
        SlProblem::new(weight, flux, l, r).expect("natural conditions are admissible")
    }

    pub fn with_offset(mut self, offset: f64) -> SlProblem {
        self.offset = offset;
        self
    }

    fn has_dirichlet(&self) -> bool {
        self.left == Bc::Dirichlet || self.right == Bc::Dirichlet
    }

    /// The problem in generic `(P, Q, W)` form. A Dirichlet condition at a
    /// pole coincides with the singular condition (the regular branch
    /// already vanishes there), so both map to the same singular end.
    pub fn sturm(&self) -> SturmProblem {
        let nu = self.flux.nu();
        let pole = End::Singular(PoleBranch {
            slope: 4.0 * PI,
            exponent: nu / 2.0,
            weight_power: 0.0,
        });
        let end = |bc: Bc, kind: WeightEnd| match (kind, bc) {
            (WeightEnd::Pole, _) => pole,
            (WeightEnd::Regular, Bc::Dirichlet) => End::Dirichlet,
            (WeightEnd::Regular, _) => End::Neumann,
        };
        let g = self.weight.function();
        let c = 4.0 * PI * PI * nu * nu;
        SturmProblem {
            x0: 0.0,
            x1: self.weight.total(),
            left: end(self.left, self.weight.left()),
            right: end(self.right, self.weight.right()),
            coefficients: Arc::new(move |a| {
                let gv = g(a);
                [gv, c / gv, 1.0]
            }),
            breakpoints: self.weight.breakpoints().to_vec(),
            offset: self.offset,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SlSolution {
    pub kappa: f64,
    pub k: usize,
    pub nu: f64,
    /// `(a, f(a))`, unit maximum, positive near the left end.
    pub samples: Vec<(f64, f64)>,
    /// `G f'` at the sample points.
    pub flux_density: Vec<f64>,
    pub zero_count: usize,
    /// Phase mismatch at the matching point, in radians.
    pub residual: f64,
}

/// Summary record of a solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionSummary {
    pub kappa: f64,
    pub k: usize,
    pub residual: f64,
    pub zero_count: usize,
}

impl SlSolution {
    pub fn summary(&self) -> SolutionSummary {
        SolutionSummary {
            kappa: self.kappa,
            k: self.k,
            residual: self.residual,
            zero_count: self.zero_count,
        }
    }

    /// `a,f` table.
    pub fn to_table(&self) -> String {
        let mut out = String::from("a,f\n");
        for (a, f) in &self.samples {
            out.push_str(&format!("{},{}\n", crate::format::sig12(*a), crate::format::sig12(*f)));
        }
        out
    }
}

fn constant_solution(problem: &SlProblem) -> SlSolution {
    let sturm = problem.sturm();
    let st = sturm.stretch();
    let (sa, sb) = sturm.s_range();
    let n = 2 * SAMPLES_PER_SIDE;
    let samples: Vec<(f64, f64)> = (0..=n).map(|i| (st.x(sa + (sb - sa) * i as f64 / n as f64), 1.0)).collect();
    SlSolution {
        kappa: 0.0,
        k: 0,
        nu: 0.0,
        flux_density: vec![0.0; samples.len()],
        samples,
        zero_count: 0,
        residual: 0.0,
    }
}

/// The `k`-th eigenvalue (zero based) with its eigenfunction.
pub fn solve(problem: &SlProblem, k: usize) -> Result<SlSolution> {
    if k == 0 && problem.flux.is_integer() && !problem.has_dirichlet() {
        return Ok(constant_solution(problem));
    }
    let sturm = problem.sturm();
    let (kappa, residual) = sturm.eigenvalue(k)?;
    let f = sturm.eigenfunction(kappa, SAMPLES_PER_SIDE)?;
    let zero_count = sign_changes(f.iter().map(|v| v.1));
    Ok(SlSolution {
        kappa,
        k,
        nu: problem.flux.nu(),
        samples: f.iter().map(|v| (v.0, v.1)).collect(),
        flux_density: f.iter().map(|v| v.2).collect(),
        zero_count,
        residual,
    })
}

/// First eigenvalue with the natural conditions of the weight.
pub fn kappa1(weight: &Weight, flux: Flux) -> Result<f64> {
    kappa_k(weight, flux, 0)
}

/// `k`-th eigenvalue with the natural conditions, without eigenfunction.
pub fn kappa_k(weight: &Weight, flux: Flux, k: usize) -> Result<f64> {
    let problem = SlProblem::natural(weight.clone(), flux);
    eigenvalue(&problem, k)
}

/// `k`-th eigenvalue only.
pub fn eigenvalue(problem: &SlProblem, k: usize) -> Result<f64> {
    if k == 0 && problem.flux.is_integer() && !problem.has_dirichlet() {
        return Ok(0.0);
    }
    Ok(problem.sturm().eigenvalue(k)?.0)
}

/// One point of the Riccati function `R = G f' / f`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RiccatiPoint {
    pub a: f64,
    pub r: f64,
    /// Finite-difference defect of `R' = (4 pi^2 nu^2 - R^2) / G - kappa`,
    /// relative to the size of the right-hand side (absent at the ends).
    pub defect: Option<f64>,
}

/// `R = G f'/f` on the interior sample grid of a first eigenfunction.
pub fn riccati_profile(solution: &SlSolution, weight: &Weight) -> Result<Vec<RiccatiPoint>> {
    if solution.zero_count != 0 {
        return Err(Error::InvalidArgument(format!(
            "Riccati function needs a first eigenfunction, got {} zeros",
            solution.zero_count
        )));
    }
    let peak = solution.samples.iter().fold(0.0f64, |m, s| m.max(s.1.abs()));
    let pts: Vec<(f64, f64)> = solution
        .samples
        .iter()
        .zip(&solution.flux_density)
        .filter(|((_, f), _)| f.abs() > 1e-12 * peak)
        .map(|((a, f), p)| (*a, p / f))
        .collect();
    let c = 4.0 * PI * PI * solution.nu * solution.nu;
    let mut out = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        let defect = if i > 0 && i + 1 < pts.len() {
            let (a0, r0) = pts[i - 1];
            let (a1, r1) = pts[i];
            let (a2, r2) = pts[i + 1];
            let h0 = a1 - a0;
            let h1 = a2 - a1;
            let fd = (r2 - r1) * h0 / (h1 * (h0 + h1)) + (r1 - r0) * h1 / (h0 * (h0 + h1));
            let rhs = (c - r1 * r1) / weight.eval(a1) - solution.kappa;
            Some((fd - rhs).abs() / (rhs.abs() + solution.kappa.abs() + 1e-12))
        } else {
            None
        };
        out.push(RiccatiPoint { a: pts[i].0, r: pts[i].1, defect });
    }
    Ok(out)
}

/// Independent finite-element estimate of the `k`-th eigenvalue.
pub fn fd_oracle(problem: &SlProblem, k: usize) -> Result<f64> {
    fd_oracle_with(problem, k, ORACLE_ELEMENTS)
}

pub fn fd_oracle_with(problem: &SlProblem, k: usize, elements: usize) -> Result<f64> {
    if k == 0 && problem.flux.is_integer() && !problem.has_dirichlet() {
        return Ok(0.0);
    }
    fem::oracle_eigenvalue(&problem.sturm(), k, elements)
}
