//! Bracketed scalar root finding with a relative stopping rule.

use roots::{find_root_brent, Convergency};

use crate::error::{Error, Result};

struct Relative {
    rel: f64,
    abs: f64,
    max_iter: usize,
}

impl Convergency<f64> for Relative {
    fn is_root_found(&mut self, y: f64) -> bool {
        y == 0.0
    }

    fn is_converged(&mut self, x1: f64, x2: f64) -> bool {
        (x1 - x2).abs() <= self.rel * x1.abs().max(x2.abs()) + self.abs
    }

    fn is_iteration_limit_reached(&mut self, iter: usize) -> bool {
        iter >= self.max_iter
    }
}

/// Brent's method on `[a, b]`; stops when the bracket is below
/// `rel * |x| + abs`.
pub fn brent<F: FnMut(f64) -> f64>(a: f64, b: f64, f: F, rel: f64, abs: f64) -> Result<f64> {
    let mut conv = Relative { rel, abs, max_iter: 500 };
    find_root_brent(a, b, f, &mut conv).map_err(|e| Error::RootFinding(format!("{e} on [{a}, {b}]")))
}
