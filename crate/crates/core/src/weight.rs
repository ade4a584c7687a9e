//! Coefficient weights `G` of the reduced one-dimensional problem on `(0, M)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::sig12;
use crate::numerics::pchip::Pchip;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightEnd {
    /// `G ~ 4 pi dist` at the end.
    Pole,
    /// `G` has a positive limit at the end.
    Regular,
}

impl fmt::Display for WeightEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightEnd::Pole => "pole",
            WeightEnd::Regular => "regular",
        })
    }
}

impl WeightEnd {
    fn parse(text: &str) -> Result<WeightEnd> {
        match text {
            "pole" => Ok(WeightEnd::Pole),
            "regular" => Ok(WeightEnd::Regular),
            _ => Err(Error::InvalidWeight(format!("unknown end kind `{text}`"))),
        }
    }
}

pub type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A positive weight on `(0, M)` with classified ends.
#[derive(Clone)]
pub struct Weight {
    m: f64,
    left: WeightEnd,
    right: WeightEnd,
    g: WeightFn,
    breakpoints: Vec<f64>,
    label: String,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight")
            .field("label", &self.label)
            .field("M", &self.m)
            .field("left", &self.left)
            .field("right", &self.right)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl Weight {
    /// Builds a weight and checks positivity on a grid and the pole asymptotics.
    pub fn new(label: &str, m: f64, left: WeightEnd, right: WeightEnd, g: WeightFn, breakpoints: Vec<f64>) -> Result<Weight> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidWeight(format!("total area must be positive, got {m}")));
        }
        let mut breakpoints: Vec<f64> = breakpoints.into_iter().filter(|b| *b > 0.0 && *b < m).collect();
        breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breakpoints.dedup();
        let w = Weight {
            m,
            left,
            right,
            g,
            breakpoints,
            label: label.to_string(),
        };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<()> {
        let n = 4000;
        for i in 1..n {
            let a = self.m * i as f64 / n as f64;
            let v = self.eval(a);
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidWeight(format!("G({a}) = {v} is not positive")));
            }
        }
        let d = 1e-6 * self.m;
        for (end, a) in [(self.left, d), (self.right, self.m - d)] {
            let v = self.eval(a);
            match end {
                WeightEnd::Pole => {
                    let ratio = v / (4.0 * PI * d);
                    if (ratio - 1.0).abs() > 1e-2 {
                        return Err(Error::InvalidWeight(format!("pole end needs G ~ 4 pi dist, got ratio {ratio} at a = {a}")));
                    }
                }
                WeightEnd::Regular => {
                    if !(v > 0.0) {
                        return Err(Error::InvalidWeight(format!("regular end needs a positive limit, got {v}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, a: f64) -> f64 {
        (self.g)(a)
    }

    pub fn function(&self) -> WeightFn {
        self.g.clone()
    }

    /// Total area `M`.
    pub fn total(&self) -> f64 {
        self.m
    }

    pub fn left(&self) -> WeightEnd {
        self.left
    }

    pub fn right(&self) -> WeightEnd {
        self.right
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Restriction to `(0, b)`; the new right end is regular.
    pub fn restricted(&self, b: f64) -> Result<Weight> {
        if !(b > 0.0 && b < self.m) {
            return Err(Error::InvalidArgument(format!("restriction point {b} outside (0, {})", self.m)));
        }
        Weight::new(
            &format!("{}|(0,{})", self.label, sig12(b)),
            b,
            self.left,
            WeightEnd::Regular,
            self.g.clone(),
            self.breakpoints.clone(),
        )
    }

    /// Weight of the surface rescaled by `sqrt(k)`: `G'(a) = k G(a / k)` on `(0, k M)`.
    pub fn rescaled(&self, k: f64) -> Result<Weight> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {k}")));
        }
        if k == 1.0 {
            return Ok(self.clone());
        }
        let g = self.g.clone();
        Weight::new(
            &format!("{}*{}", self.label, sig12(k)),
            k * self.m,
            self.left,
            self.right,
            Arc::new(move |a| k * g(a / k)),
            self.breakpoints.iter().map(|b| k * b).collect(),
        )
    }

    /// `n + 1` samples clustered toward both ends.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|i| {
                let a = 0.5 * self.m * (1.0 - (PI * i as f64 / n as f64).cos());
                let a = if i == n { self.m } else { a };
                let v = match (i, self.left, self.right) {
                    (0, WeightEnd::Pole, _) => 0.0,
                    (i, _, WeightEnd::Pole) if i == n => 0.0,
                    _ => self.eval(a),
                };
                (a, v)
            })
            .collect()
    }

    /// Text table: a header declaring `M` and the end kinds, then `a,G` rows.
    pub fn to_table(&self, n: usize) -> String {
        let mut out = format!("# weight M={} left={} right={}\n", sig12(self.m), self.left, self.right);
        out.push_str("a,G\n");
        for (a, g) in self.samples(n) {
            out.push_str(&format!("{},{}\n", sig12(a), sig12(g)));
        }
        out
    }

    /// Reads the table format written by [`Weight::to_table`], interpolating
    /// with monotone cubics; pole ends get slope `+-4 pi`.
    pub fn from_table(text: &str) -> Result<Weight> {
        let mut m = None;
        let mut left = WeightEnd::Pole;
        let mut right = WeightEnd::Regular;
        let mut a = Vec::new();
        let mut g = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let row = raw.trim();
            if row.is_empty() || row == "a,G" {
                continue;
            }
            if let Some(header) = row.strip_prefix('#') {
                for token in header.split_whitespace() {
                    if let Some(v) = token.strip_prefix("M=") {
                        m = Some(v.parse::<f64>().map_err(|e| Error::Parse {
                            line,
                            message: format!("bad M: {e}"),
                        })?);
                    } else if let Some(v) = token.strip_prefix("left=") {
                        left = WeightEnd::parse(v)?;
                    } else if let Some(v) = token.strip_prefix("right=") {
                        right = WeightEnd::parse(v)?;
                    }
                }
                continue;
            }
            let (x, y) = row.split_once(',').ok_or(Error::Parse {
                line,
                message: format!("expected `a,G`, got `{row}`"),
            })?;
            let num = |t: &str| {
                t.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("{e}: `{t}`"),
                })
            };
            a.push(num(x)?);
            g.push(num(y)?);
        }
        if a.len() < 4 {
            return Err(Error::InvalidWeight("a weight table needs at least 4 rows".into()));
        }
        let total = m.unwrap_or(*a.last().unwrap());
        let spline = Pchip::new(a, g)
            .map_err(|e| Error::InvalidWeight(e.to_string()))?
            .with_end_slopes((left == WeightEnd::Pole).then_some(4.0 * PI), (right == WeightEnd::Pole).then_some(-4.0 * PI));
        Weight::new("table", total, left, right, Arc::new(move |x| spline.eval(x)), vec![])
    }
}
