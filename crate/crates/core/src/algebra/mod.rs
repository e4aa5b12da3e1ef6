//! Exact coefficient arithmetic.
//!
//! Two coefficient rings are supported: big rationals ([`BigRat`]) and dense
//! univariate polynomials in the marking variable `rho` ([`PolyQ`]). Both
//! implement [`Ring`], which is the only contract the series code relies on.
//! Division is deliberately absent from the contract; the only divisions in
//! the engine are by integers, done through [`Ring::scale`].

mod poly;
mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub use poly::{poly_eval, poly_mul, PolyQ};
pub use rational::{
    binomial, double_factorial, factorial, falling_factorial, parse_rat, rat_from_json, rat_pow,
    rat_to_decimal, rat_to_json, BigRat,
};

/// Which coefficient ring a value or series lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingTag {
    Rational,
    PolynomialInRho,
}

impl RingTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RingTag::Rational => "rational",
            RingTag::PolynomialInRho => "poly_rho",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(RingTag::Rational),
            "poly_rho" => Ok(RingTag::PolynomialInRho),
            other => Err(Error::Parse(format!("unknown ring tag `{other}`"))),
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A commutative ring with exact equality, containing the rationals.
pub trait Ring:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + 'static
{
    const TAG: RingTag;

    /// Multiplication by a rational scalar.
    fn scale(&self, c: &BigRat) -> Self;

    /// The image of a rational under the canonical embedding.
    fn from_rat(c: BigRat) -> Self;

    /// Converts a dynamically tagged value into this ring. Rationals embed
    /// into polynomials as constants; the converse is rejected.
    fn from_value(v: RingValue) -> Result<Self>;

    fn into_value(self) -> RingValue;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_rat(BigRat::from_integer(n.into()))
    }

    fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

impl Ring for BigRat {
    const TAG: RingTag = RingTag::Rational;

    fn scale(&self, c: &BigRat) -> Self {
        self * c
    }

    fn from_rat(c: BigRat) -> Self {
        c
    }

    fn from_value(v: RingValue) -> Result<Self> {
        match v {
            RingValue::Rational(r) => Ok(r),
            RingValue::Poly(p) => p.constant_value().ok_or(Error::RingMismatch {
                expected: RingTag::Rational,
                found: RingTag::PolynomialInRho,
            }),
        }
    }

    fn into_value(self) -> RingValue {
        RingValue::Rational(self)
    }

    fn to_json(&self) -> Value {
        rat_to_json(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        rat_from_json(v)
    }
}

impl Ring for PolyQ {
    const TAG: RingTag = RingTag::PolynomialInRho;

    fn scale(&self, c: &BigRat) -> Self {
        PolyQ::scale(self, c)
    }

    fn from_rat(c: BigRat) -> Self {
        PolyQ::constant(c)
    }

    fn from_value(v: RingValue) -> Result<Self> {
        Ok(match v {
            RingValue::Rational(r) => PolyQ::constant(r),
            RingValue::Poly(p) => p,
        })
    }

    fn into_value(self) -> RingValue {
        RingValue::Poly(self)
    }

    fn to_json(&self) -> Value {
        PolyQ::to_json(self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        PolyQ::from_json(v)
    }
}

/// A ring element whose ring is only known at runtime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingValue {
    Rational(BigRat),
    Poly(PolyQ),
}

impl RingValue {
    pub fn tag(&self) -> RingTag {
        match self {
            RingValue::Rational(_) => RingTag::Rational,
            RingValue::Poly(_) => RingTag::PolynomialInRho,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingValue::Rational(r) => r.is_zero(),
            RingValue::Poly(p) => p.is_zero(),
        }
    }

    /// Specializes `rho` to a rational value; rationals pass through.
    pub fn eval(&self, rho: &BigRat) -> BigRat {
        match self {
            RingValue::Rational(r) => r.clone(),
            RingValue::Poly(p) => p.eval(rho),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RingValue::Rational(r) => rat_to_json(r),
            RingValue::Poly(p) => p.to_json(),
        }
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingValue::Rational(r) => write!(f, "{r}"),
            RingValue::Poly(p) => write!(f, "{p}"),
        }
    }
}
