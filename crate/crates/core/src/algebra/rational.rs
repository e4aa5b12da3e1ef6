use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type BigRat = BigRational;

/// Parses `"p/q"`, `"-p/q"`, an integer, or a terminating decimal such as
/// `"0.25"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRat::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRat::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRat::from_integer(n))
}

pub fn rat_to_json(r: &BigRat) -> Value {
    Value::String(r.to_string())
}

pub fn rat_from_json(v: &Value) -> Result<BigRat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) if n.is_i64() => Ok(BigRat::from_integer(n.as_i64().unwrap().into())),
        other => Err(Error::Parse(format!("expected a rational string, got {other}"))),
    }
}

/// Integer power with a possibly negative exponent. Panics on `0^(-k)`.
pub fn rat_pow(r: &BigRat, e: i64) -> BigRat {
    if e >= 0 {
        Pow::pow(r, e as u64)
    } else {
        Pow::pow(r.recip(), e.unsigned_abs())
    }
}

/// Renders `r` in scientific notation with `digits` significant digits,
/// rounding half away from zero. Exact up to the final rounding.
pub fn rat_to_decimal(r: &BigRat, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let ten = BigInt::from(10u32);

    // Find e with 10^e <= a < 10^(e+1).
    let mut e = estimate_log10(&a);
    loop {
        let lo = rat_pow(&BigRat::from_integer(ten.clone()), e);
        if a < lo {
            e -= 1;
            continue;
        }
        if a >= &lo * BigRat::from_integer(ten.clone()) {
            e += 1;
            continue;
        }
        break;
    }

    let shift = digits as i64 - 1 - e;
    let scaled = &a * rat_pow(&BigRat::from_integer(ten.clone()), shift);
    let mut mantissa = round_half_away(&scaled);
    if mantissa >= ten.clone().pow(digits as u32) {
        mantissa /= &ten;
        e += 1;
    }
    let m = mantissa.to_string();
    let (head, tail) = m.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

fn estimate_log10(a: &BigRat) -> i64 {
    let n = a.numer().to_string().len() as i64;
    let d = a.denom().to_string().len() as i64;
    n - d
}

fn round_half_away(x: &BigRat) -> BigInt {
    let (q, r) = x.numer().div_rem(x.denom());
    if BigInt::from(2u32) * r.abs() >= *x.denom() {
        if x.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `n (n-2) (n-4) ...` down to 1 or 2; `0!! = (-1)!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::DoubleFactorialDomain(n));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}
