use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::rational::{parse_rat, rat_from_json, rat_to_json, BigRat};
use crate::error::{Error, Result};

/// Dense univariate polynomial in `rho` with rational coefficients.
///
/// `coeffs[i]` is the coefficient of `rho^i`. Trailing zeros are always
/// trimmed, so the zero polynomial has no coefficients and two equal
/// polynomials have identical vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<BigRat>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        PolyQ::new(coeffs.iter().map(|&c| BigRat::from_integer(c.into())).collect())
    }

    pub fn constant(c: BigRat) -> Self {
        PolyQ::new(vec![c])
    }

    /// The marking variable itself.
    pub fn rho() -> Self {
        PolyQ::from_ints(&[0, 1])
    }

    pub fn monomial(c: BigRat, degree: usize) -> Self {
        let mut coeffs = vec![BigRat::zero(); degree + 1];
        coeffs[degree] = c;
        PolyQ::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> BigRat {
        self.coeffs.get(degree).cloned().unwrap_or_else(BigRat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_value(&self) -> Option<BigRat> {
        match self.coeffs.len() {
            0 => Some(BigRat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return PolyQ::default();
        }
        PolyQ {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Sum of the coefficients, i.e. the value at `rho = 1`.
    pub fn coefficient_sum(&self) -> BigRat {
        self.coeffs.iter().fold(BigRat::zero(), |acc, c| acc + c)
    }

    fn add_ref(&self, other: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        PolyQ::new(coeffs)
    }

    fn mul_ref(&self, other: &PolyQ) -> PolyQ {
        if self.is_zero() || other.is_zero() {
            return PolyQ::default();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::new(out)
    }

    fn neg_ref(&self) -> PolyQ {
        PolyQ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `{"var":"rho","coeffs":[...]}` with ascending-degree exact strings.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coeffs.iter().map(rat_to_json).collect();
        json!({ "var": "rho", "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("polynomial must be a JSON object".into()))?;
        match obj.get("var").and_then(Value::as_str) {
            Some("rho") => {}
            _ => return Err(Error::Parse("polynomial variable must be `rho`".into())),
        }
        let coeffs = obj
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("polynomial needs a `coeffs` array".into()))?;
        Ok(PolyQ::new(
            coeffs.iter().map(rat_from_json).collect::<Result<_>>()?,
        ))
    }
}

/// Product of two polynomials.
pub fn poly_mul(a: &PolyQ, b: &PolyQ) -> PolyQ {
    a.mul_ref(b)
}

pub fn poly_eval(a: &PolyQ, x: &BigRat) -> BigRat {
    a.eval(x)
}

impl Zero for PolyQ {
    fn zero() -> Self {
        PolyQ::default()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for PolyQ {
    fn one() -> Self {
        PolyQ::from_ints(&[1])
    }
}

impl Neg for PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        self.neg_ref()
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        self.neg_ref()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $method(self, rhs: PolyQ) -> PolyQ {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $method(self, rhs: &'a PolyQ) -> PolyQ {
                $body(&self, rhs)
            }
        }
        impl<'a> $tr<PolyQ> for &'a PolyQ {
            type Output = PolyQ;
            fn $method(self, rhs: PolyQ) -> PolyQ {
                $body(self, &rhs)
            }
        }
        impl<'a, 'b> $tr<&'b PolyQ> for &'a PolyQ {
            type Output = PolyQ;
            fn $method(self, rhs: &'b PolyQ) -> PolyQ {
                $body(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &PolyQ, b: &PolyQ| a.add_ref(b));
forward_binop!(Sub, sub, |a: &PolyQ, b: &PolyQ| a.add_ref(&b.neg_ref()));
forward_binop!(Mul, mul, |a: &PolyQ, b: &PolyQ| a.mul_ref(b));

/// Descending-degree rendering such as `rho^3+3rho^2-3rho+1`. Non-integer
/// coefficients are parenthesised: `(1/3)rho^2`.
impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let a = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            if deg == 0 {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                if a.is_integer() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            f.write_str("rho")?;
            if deg > 1 {
                write!(f, "^{deg}")?;
            }
        }
        Ok(())
    }
}

/// Inverse of the `Display` format. Also accepts `ρ`, spaces, `*` between
/// coefficient and variable, and repeated degrees (which are summed).
impl FromStr for PolyQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .replace('ρ', "rho")
            .replace('−', "-")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        let bad = |why: &str| Error::Parse(format!("bad polynomial `{s}`: {why}"));
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let bytes = cleaned.as_bytes();
        let mut pos = 0;
        let mut acc = PolyQ::zero();
        while pos < bytes.len() {
            let mut negative = false;
            match bytes[pos] {
                b'+' => pos += 1,
                b'-' => {
                    negative = true;
                    pos += 1;
                }
                _ if pos > 0 => return Err(bad("expected sign")),
                _ => {}
            }
            let start = pos;
            let coeff = if bytes.get(pos) == Some(&b'(') {
                let close = cleaned[pos..]
                    .find(')')
                    .ok_or_else(|| bad("unbalanced parenthesis"))?;
                let c = parse_rat(&cleaned[pos + 1..pos + close])?;
                pos += close + 1;
                Some(c)
            } else {
                while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                    pos += 1;
                }
                if pos > start {
                    Some(parse_rat(&cleaned[start..pos])?)
                } else {
                    None
                }
            };
            if bytes.get(pos) == Some(&b'*') {
                pos += 1;
            }
            let degree = if cleaned[pos..].starts_with("rho") {
                pos += 3;
                if bytes.get(pos) == Some(&b'^') {
                    pos += 1;
                    let dstart = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    cleaned[dstart..pos]
                        .parse::<usize>()
                        .map_err(|_| bad("bad exponent"))?
                } else {
                    1
                }
            } else if coeff.is_some() {
                0
            } else {
                return Err(bad("expected a term"));
            };
            let mut c = coeff.unwrap_or_else(BigRat::one);
            if negative {
                c = -c;
            }
            acc = acc + PolyQ::monomial(c, degree);
        }
        Ok(acc)
    }
}
