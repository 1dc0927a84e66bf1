//! Surgery coefficients `(s, r)` from the meridian and longitude holonomies.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

/// Default height bound of the rational-ratio search.
pub const DEFAULT_HEIGHT: i64 = 1_000_000;
/// Relative tolerance of the float ratio test.
pub const RATIO_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurgeryError {
    #[error("no rational relation within height {0}")]
    NoRationalRelation(i64),
    #[error("both holonomies are trivial")]
    ZeroHolonomy,
    #[error("holonomies must be both parabolic or both Cartan")]
    InconsistentTags,
    #[error("cannot parse holonomy {0:?}")]
    Parse(String),
}

/// An entry given exactly as a rational or approximately as a complex number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Entry {
    Exact(BigRational),
    Float(Complex64),
}

impl Entry {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Entry::Exact(q) => Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0),
            Entry::Float(z) => *z,
        }
    }
}

/// `(1, x)` or `(t, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Holonomy {
    Parabolic(Entry),
    Cartan(Entry),
}

impl FromStr for Holonomy {
    type Err = SurgeryError;

    /// `parabolic:3/2`, `cartan:4`, `parabolic:1.5+0.2i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SurgeryError::Parse(s.into());
        let (tag, value) = s.split_once(':').ok_or_else(err)?;
        let entry = if let Ok(q) = BigRational::from_str(value.trim()) {
            Entry::Exact(q)
        } else if let Ok(n) = BigInt::from_str(value.trim()) {
            Entry::Exact(BigRational::from_integer(n))
        } else {
            Entry::Float(Complex64::from_str(value.trim()).map_err(|_| err())?)
        };
        match tag.trim() {
            "parabolic" => Ok(Holonomy::Parabolic(entry)),
            "cartan" => Ok(Holonomy::Cartan(entry)),
            _ => Err(err()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgeryCoefficients {
    pub s: i64,
    pub r: i64,
    /// Set when the answer depends on a choice of logarithm branch.
    pub warning: Option<String>,
}

/// Coprime `(s, r)` with `s > 0`, or `s = 0, r = 1`, solving `s·a + r·b = 0`.
fn normalize(s: i64, r: i64) -> (i64, i64) {
    let g = s.gcd(&r).max(1);
    let (s, r) = (s / g, r / g);
    if s < 0 || (s == 0 && r < 0) {
        (-s, -r)
    } else {
        (s, r)
    }
}

/// Best approximation `p/q` of `x` with `|p|, q <= height`, by continued fractions.
pub fn rational_approximation(x: f64, height: i64) -> Option<(i64, i64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > height as f64 {
            break;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if p2.abs() > height as i128 || q2 > height as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (x - p1 as f64 / q1 as f64).abs() <= RATIO_TOL * x.abs().max(1.0) {
            return Some((p1 as i64, q1 as i64));
        }
        let frac = y - a as f64;
        if frac == 0.0 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

/// Solves `a·s + b·r = 0` for the pair of numbers `(a, b)`.
fn solve(a: &Entry, b: &Entry, height: i64) -> Result<(i64, i64), SurgeryError> {
    if let (Entry::Exact(a), Entry::Exact(b)) = (a, b) {
        return match (a.is_zero(), b.is_zero()) {
            (true, true) => Err(SurgeryError::ZeroHolonomy),
            (true, false) => Ok((1, 0)),
            (false, true) => Ok((0, 1)),
            _ => {
                // s/r = -b/a
                let q = -(b / a);
                let (s, r) = (q.numer().clone(), q.denom().clone());
                if s.abs() > BigInt::from(height) || r > BigInt::from(height) {
                    return Err(SurgeryError::NoRationalRelation(height));
                }
                Ok(normalize(s.to_i64().expect("bounded"), r.to_i64().expect("bounded")))
            }
        };
    }
    let (a, b) = (a.to_complex(), b.to_complex());
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        return Err(SurgeryError::ZeroHolonomy);
    }
    if a.norm() <= RATIO_TOL * scale {
        return Ok((1, 0));
    }
    if b.norm() <= RATIO_TOL * scale {
        return Ok((0, 1));
    }
    let ratio = -b / a;
    if ratio.im.abs() > RATIO_TOL * ratio.norm() {
        return Err(SurgeryError::NoRationalRelation(height));
    }
    let (s, r) = rational_approximation(ratio.re, height).ok_or(SurgeryError::NoRationalRelation(height))?;
    Ok(normalize(s, r))
}

/// `s·x + r·y = 0` for parabolic holonomies, `t^s z^r = 1` on principal logs for Cartan ones.
pub fn surgery_coefficients(alpha: &Holonomy, beta: &Holonomy, height: i64) -> Result<SurgeryCoefficients, SurgeryError> {
    match (alpha, beta) {
        (Holonomy::Parabolic(x), Holonomy::Parabolic(y)) => {
            let (s, r) = solve(x, y, height)?;
            Ok(SurgeryCoefficients { s, r, warning: None })
        }
        (Holonomy::Cartan(t), Holonomy::Cartan(z)) => {
            let log = |e: &Entry| Entry::Float(e.to_complex().ln());
            let (s, r) = solve(&log(t), &log(z), height)?;
            let warning = "principal logarithms only: relations through the 2πi lattice are not searched".to_string();
            Ok(SurgeryCoefficients { s, r, warning: Some(warning) })
        }
        _ => Err(SurgeryError::InconsistentTags),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(s: &str) -> Holonomy {
        s.parse().unwrap()
    }

    #[test]
    fn spec_examples() {
        let pc = surgery_coefficients(&h("parabolic:2"), &h("parabolic:3"), DEFAULT_HEIGHT).unwrap();
        assert_eq!((pc.s, pc.r), (3, -2));
        let irr = Holonomy::Parabolic(Entry::Float(Complex64::new(2f64.sqrt(), 0.0)));
        assert_eq!(
            surgery_coefficients(&h("parabolic:1"), &irr, DEFAULT_HEIGHT).unwrap_err(),
            SurgeryError::NoRationalRelation(DEFAULT_HEIGHT)
        );
        let cartan = surgery_coefficients(&h("cartan:4"), &h("cartan:2"), DEFAULT_HEIGHT).unwrap();
        assert_eq!((cartan.s, cartan.r), (1, -2));
        assert!(cartan.warning.is_some());
    }

    #[test]
    fn degenerate_and_inconsistent_inputs() {
        assert_eq!(surgery_coefficients(&h("parabolic:0"), &h("parabolic:0"), 10).unwrap_err(), SurgeryError::ZeroHolonomy);
        let c = surgery_coefficients(&h("parabolic:0"), &h("parabolic:5"), 10).unwrap();
        assert_eq!((c.s, c.r), (1, 0));
        assert_eq!(surgery_coefficients(&h("parabolic:1"), &h("cartan:2"), 10).unwrap_err(), SurgeryError::InconsistentTags);
        assert!("elliptic:2".parse::<Holonomy>().is_err());
        let c = surgery_coefficients(&h("parabolic:1.5+0i"), &h("parabolic:-2.5"), 100).unwrap();
        assert_eq!((c.s, c.r), (5, 3));
    }

    #[test]
    fn height_bound_is_enforced() {
        let e = surgery_coefficients(&h("parabolic:1"), &h("parabolic:1000/999"), 100).unwrap_err();
        assert_eq!(e, SurgeryError::NoRationalRelation(100));
    }

    proptest! {
        #[test]
        fn exact_relations_hold(s in -300i64..300, r in 1i64..300, x in 1i64..50) {
            // x_alpha = r·x, y_beta = -s·x solves s·x_alpha + r·y_beta = 0 up to scaling
            let a = Holonomy::Parabolic(Entry::Exact(BigRational::from_integer((r * x).into())));
            let b = Holonomy::Parabolic(Entry::Exact(BigRational::from_integer((-s * x).into())));
            let c = surgery_coefficients(&a, &b, DEFAULT_HEIGHT).unwrap();
            prop_assert_eq!(c.s.gcd(&c.r), 1);
            prop_assert_eq!(c.s * r * x + c.r * (-s * x), 0);
        }

        #[test]
        fn float_ratios_are_recovered(p in -1000i64..1000, q in 1i64..1000) {
            prop_assume!(p != 0);
            let (p, q) = (p / p.gcd(&q), q / p.gcd(&q));
            let x = p as f64 / q as f64;
            prop_assert_eq!(rational_approximation(x, DEFAULT_HEIGHT), Some((p, q)));
        }
    }
}
