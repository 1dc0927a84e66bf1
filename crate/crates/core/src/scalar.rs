//! Field-like scalars shared by the exact and floating code paths.

use crate::poly::Poly;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub trait Scalar: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, when it exists in this scalar type.
    fn inv(&self) -> Option<Self>;
    /// Exact zero test, or `|z| <= tol` for floating scalars.
    fn is_zero_within(&self, tol: f64) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n).mul(&Self::from_i64(d).inv().expect("nonzero denominator"))
    }
    fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.sub(o).is_zero_within(tol)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn is_zero_within(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| self.inv())
    }
    fn is_zero_within(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Scalar for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::int(1)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    /// Only nonzero constants are invertible.
    fn inv(&self) -> Option<Self> {
        let c = self.as_constant()?;
        (!Zero::is_zero(&c)).then(|| Poly::constant(c.recip()))
    }
    fn is_zero_within(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        Poly::int(n)
    }
}
