//! Independent discretization: linear finite elements on a mesh uniform in
//! the stretched variable, lumped mass, and a symmetric tridiagonal
//! eigenproblem solved by Sturm counts.

use crate::error::{Error, Result};
use crate::numerics::quad::GaussRule;
use crate::numerics::tridiag::kth_eigenvalue;

use super::engine::{End, SturmProblem};

/// Logistic grading toward both ends, independent of the shooting map.
fn graded(p: &SturmProblem, s: f64) -> f64 {
    let w = p.x1 - p.x0;
    if s <= 0.0 {
        let e = s.exp();
        p.x0 + w * e / (1.0 + e)
    } else {
        p.x1 - w / (1.0 + s.exp())
    }
}

fn graded_inverse(p: &SturmProblem, x: f64) -> f64 {
    ((x - p.x0) / (p.x1 - x)).ln()
}

/// Nodes uniform in the graded variable on each smooth piece, with even
/// element counts per piece so that dropping every other node gives a
/// nested coarse mesh. Pole ends start at the offset; regular ends get an
/// extra node at the exact endpoint.
fn nested_mesh(p: &SturmProblem, elements: usize, coarse: bool) -> Vec<f64> {
    let d = p.offset * (p.x1 - p.x0);
    let mut breaks: Vec<f64> = p.breakpoints.iter().copied().filter(|b| *b > p.x0 + d && *b < p.x1 - d).collect();
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let mut bounds = vec![graded_inverse(p, p.x0 + d)];
    bounds.extend(breaks.iter().map(|b| graded_inverse(p, *b)));
    bounds.push(graded_inverse(p, p.x1 - d));
    let span = bounds[bounds.len() - 1] - bounds[0];
    let mut nodes = Vec::with_capacity(elements + 8);
    if !p.left.is_singular() {
        nodes.push(p.x0);
        nodes.push(p.x0 + d);
    } else {
        nodes.push(p.x0 + d);
    }
    let last = bounds.len() - 2;
    for (i, w) in bounds.windows(2).enumerate() {
        let n = (((w[1] - w[0]) / span * elements as f64 / 2.0).round() as usize).max(1) * 2;
        for j in 1..=n {
            let x = if j < n {
                graded(p, w[0] + (w[1] - w[0]) * j as f64 / n as f64)
            } else if i < last {
                breaks[i]
            } else {
                p.x1 - d
            };
            nodes.push(x);
        }
    }
    if !p.right.is_singular() {
        nodes.push(p.x1);
    }
    if coarse {
        // keep the exact end nodes, coarsen the graded interior
        let lead = usize::from(!p.left.is_singular());
        let trail = usize::from(!p.right.is_singular());
        let inner = &nodes[lead..nodes.len() - trail];
        let mut out: Vec<f64> = nodes[..lead].to_vec();
        out.extend(inner.iter().step_by(2));
        out.extend_from_slice(&nodes[nodes.len() - trail..]);
        out
    } else {
        nodes
    }
}

/// `k`-th Ritz value on the given node set.
fn ritz_value(p: &SturmProblem, nodes: &[f64], k: usize) -> Result<f64> {
    let n = nodes.len();
    let rule = GaussRule::new(3);
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    let mut mass = vec![0.0; n];
    for i in 0..n - 1 {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let h = b - a;
        for (x, w) in rule.points(a, b) {
            let [pp, q, ww] = (p.coefficients)(x);
            let t = (x - a) / h;
            let (phi0, phi1) = (1.0 - t, t);
            let stiff = pp / (h * h);
            diag[i] += w * (stiff + q * phi0 * phi0);
            diag[i + 1] += w * (stiff + q * phi1 * phi1);
            off[i] += w * (-stiff + q * phi0 * phi1);
            mass[i] += w * ww * phi0;
            mass[i + 1] += w * ww * phi1;
        }
    }
    let d = p.offset * (p.x1 - p.x0);
    for (end, idx, x) in [(p.left, 0usize, nodes[0]), (p.right, n - 1, nodes[n - 1])] {
        if let End::Singular(b) = end {
            let wv = (p.coefficients)(x)[2];
            diag[idx] += b.slope * b.exponent;
            mass[idx] += wv * d / (b.weight_power + 1.0 + 2.0 * b.exponent);
        }
    }
    let lo = if p.left == End::Dirichlet { 1 } else { 0 };
    let hi = if p.right == End::Dirichlet { n - 1 } else { n };
    if hi <= lo + k {
        return Err(Error::InvalidArgument(format!("mesh too coarse for index {k}")));
    }
    let scale: Vec<f64> = mass.iter().map(|m| 1.0 / m.sqrt()).collect();
    let dd: Vec<f64> = (lo..hi).map(|i| diag[i] * scale[i] * scale[i]).collect();
    let ee: Vec<f64> = (lo..hi - 1).map(|i| off[i] * scale[i] * scale[i + 1]).collect();
    Ok(kth_eigenvalue(&dd, &ee, k))
}

/// Richardson-extrapolated `k`-th eigenvalue from meshes with `elements`
/// and `elements / 2` elements.
pub fn oracle_eigenvalue(p: &SturmProblem, k: usize, elements: usize) -> Result<f64> {
    let fine = nested_mesh(p, elements, false);
    let coarse = nested_mesh(p, elements, true);
    let lf = ritz_value(p, &fine, k)?;
    let lc = ritz_value(p, &coarse, k)?;
    Ok((4.0 * lf - lc) / 3.0)
}
