//! Quadrature helpers: double-exponential integration split at breakpoints,
//! and fixed Gauss-Legendre rules for panel sums.

use crate::error::{Error, Result};

/// Integrates `f` over `[a, b]`, splitting at the interior `breaks`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], abs_tol: f64) -> Result<f64> {
    let mut nodes = vec![a];
    nodes.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    nodes.push(b);
    let pieces = (nodes.len() - 1) as f64;
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let out = quadrature::integrate(&f, w[0], w[1], abs_tol / pieces);
        if !out.integral.is_finite() {
            return Err(Error::Integration(format!("non-finite integral on [{}, {}]", w[0], w[1])));
        }
        total += out.integral;
    }
    Ok(total)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A Gauss-Legendre rule mapped onto arbitrary intervals.
#[derive(Clone, Debug)]
pub struct GaussRule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        GaussRule { x, w }
    }

    pub fn apply<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        r * self.x.iter().zip(&self.w).map(|(x, w)| w * f(c + r * x)).sum::<f64>()
    }

    pub fn points(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        self.x.iter().zip(&self.w).map(move |(x, w)| (c + r * x, r * w))
    }
}
