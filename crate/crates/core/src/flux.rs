//! Aharonov-Bohm flux values and their gauge reduction.
//!
//! Two potentials whose circulations differ by an integer produce the same
//! spectrum, so every computation here works with the representative
//! `min_n |nu - n|`, which lies in `[0, 1/2]`. Fluxes written as `p/q` (or as
//! finite decimals) are kept as exact rationals so that coincidences between
//! eigenvalue branches can be detected without floating-point ties.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// A real number that is either an exact rational or a floating-point value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Scalar::Approx(x) => x,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Approx(x) => x == 0.0,
        }
    }

    /// `self + n` for an integer `n`.
    pub fn add_int(self, n: i64) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q + Rational::from_integer(n)),
            Scalar::Approx(x) => Scalar::Approx(x + n as f64),
        }
    }

    /// `n - self` for an integer `n`.
    pub fn sub_from_int(self, n: i64) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(Rational::from_integer(n) - q),
            Scalar::Approx(x) => Scalar::Approx(n as f64 - x),
        }
    }

    pub fn abs(self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.abs()),
            Scalar::Approx(x) => Scalar::Approx(x.abs()),
        }
    }

    /// Exact equality for rationals, relative tolerance `rel` otherwise.
    pub fn same_as(self, other: Scalar, rel: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Approx(x) => write!(f, "{}", crate::format::sig12(*x)),
        }
    }
}

/// Circulation of an Aharonov-Bohm potential together with its gauge-reduced
/// representative in `[0, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flux {
    raw: Scalar,
    reduced: Scalar,
}

impl Flux {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() {
            return Err(Error::NonFiniteFlux(nu));
        }
        let reduced = (nu - nu.round()).abs();
        Ok(Flux {
            raw: Scalar::Approx(nu),
            reduced: Scalar::Approx(reduced.min(0.5)),
        })
    }

    pub fn rational(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::FluxSyntax(format!("{numer}/{denom}")));
        }
        Ok(Self::from_ratio(Rational::new(numer, denom)))
    }

    pub fn from_ratio(q: Rational) -> Self {
        let reduced = (q - q.round()).abs();
        Flux {
            raw: Scalar::Exact(q),
            reduced: Scalar::Exact(reduced),
        }
    }

    /// Parses `p/q`, a finite decimal (kept exact) or any other float literal.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| Error::FluxSyntax(s.into()))?;
            let q: i64 = q.trim().parse().map_err(|_| Error::FluxSyntax(s.into()))?;
            return Self::rational(p, q);
        }
        if let Some(q) = parse_decimal(s) {
            return Ok(Self::from_ratio(q));
        }
        let x: f64 = s.parse().map_err(|_| Error::FluxSyntax(s.into()))?;
        Self::new(x)
    }

    pub fn raw(&self) -> Scalar {
        self.raw
    }

    pub fn reduced(&self) -> Scalar {
        self.reduced
    }

    /// The reduced flux as a float, in `[0, 1/2]`.
    pub fn nu(&self) -> f64 {
        self.reduced.to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.raw.is_exact()
    }

    pub fn is_integer(&self) -> bool {
        self.reduced.is_zero()
    }

    pub fn is_half(&self) -> bool {
        match self.reduced {
            Scalar::Exact(q) => q == Rational::new(1, 2),
            Scalar::Approx(x) => x == 0.5,
        }
    }
}

impl fmt::Display for Flux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.raw)
    }
}

impl Serialize for Flux {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Flux", 3)?;
        st.serialize_field("raw", &self.raw.to_string())?;
        st.serialize_field("reduced", &self.reduced.to_string())?;
        st.serialize_field("nu", &self.nu())?;
        st.end()
    }
}

/// Gauge reduction of a real flux value.
pub fn reduce_flux(nu: f64) -> Result<Flux> {
    Flux::new(nu)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if int.len() + frac.len() > 17 {
        return None;
    }
    let digits: i64 = format!("{int}{frac}").parse().ok()?;
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let q = Rational::new(digits, denom);
    Some(if neg { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_examples() {
        assert!((reduce_flux(2.7).unwrap().nu() - 0.3).abs() < 1e-15);
        assert_eq!(reduce_flux(-0.5).unwrap().nu(), 0.5);
        let f = reduce_flux(3.0).unwrap();
        assert_eq!(f.nu(), 0.0);
        assert!(f.is_integer());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(reduce_flux(f64::NAN), Err(Error::NonFiniteFlux(_))));
        assert!(reduce_flux(f64::INFINITY).is_err());
    }

    #[test]
    fn rational_reduction_is_exact() {
        let f = Flux::parse("27/10").unwrap();
        assert_eq!(f.reduced(), Scalar::Exact(Rational::new(3, 10)));
        let f = Flux::parse("-7/2").unwrap();
        assert!(f.is_half());
        let f = Flux::parse("0.3").unwrap();
        assert_eq!(f.reduced(), Scalar::Exact(Rational::new(3, 10)));
        let f = Flux::parse("-2.75").unwrap();
        assert_eq!(f.reduced(), Scalar::Exact(Rational::new(1, 4)));
        let f = Flux::parse("1e-3").unwrap();
        assert!(!f.is_exact());
        assert!(Flux::parse("1/0").is_err());
        assert!(Flux::parse("abc").is_err());
    }
}
