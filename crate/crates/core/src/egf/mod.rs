//! Truncated exponential generating series over a [`Ring`].
//!
//! An [`Egf`] stores normalized coefficients `c_n = a_n / n!`, so species
//! product and substitution are plain power-series product and composition.
//! Total weights are recovered with [`Egf::total_weight`].
//!
//! A series may be *compressed* with stride `p` ([`Egf::compress`]): slot `k`
//! then holds `a_{pk} / (pk)!`, i.e. the series is read in the variable
//! `w = z^p`. Every operation that is a ring homomorphism image of the
//! substitution `z -> z^p` (products, inverses, `log`, `exp`, substitution
//! into an uncompressed outer series) is valid on compressed series.

mod standard;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::algebra::{factorial, BigRat, Ring, RingTag};
use crate::error::{Error, Result};

pub use standard::StdSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Egf<R> {
    coeffs: Vec<R>,
    stride: usize,
}

fn inv_int(n: usize) -> BigRat {
    BigRat::new(BigInt::one(), BigInt::from(n))
}

impl<R: Ring> Egf<R> {
    /// Series with the given normalized coefficients; order is `len - 1`.
    ///
    /// Panics on an empty vector: a truncated series always has `c_0`.
    pub fn new(coeffs: Vec<R>) -> Self {
        Self::with_stride(coeffs, 1)
    }

    pub fn with_stride(coeffs: Vec<R>, stride: usize) -> Self {
        assert!(!coeffs.is_empty(), "a series of order N has N+1 coefficients");
        assert!(stride >= 1);
        Egf { coeffs, stride }
    }

    /// Builds `sum a_n z^n / n!` from total weights `a_0..a_N`.
    pub fn from_total_weights(weights: Vec<R>) -> Self {
        let coeffs = weights
            .into_iter()
            .enumerate()
            .map(|(n, a)| a.scale(&BigRat::new(BigInt::one(), factorial(n))))
            .collect();
        Egf::new(coeffs)
    }

    pub fn zero(order: usize) -> Self {
        Egf::new(vec![R::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = R::one();
        s
    }

    /// The identity series `z` (the singleton species).
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = R::one();
        }
        s
    }

    pub fn constant(c: R, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn ring(&self) -> RingTag {
        R::TAG
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    /// Total weight `a_{pk} = c_k * (pk)!` carried by slot `k`.
    pub fn total_weight(&self, k: usize) -> R {
        self.coeffs[k].scale(&BigRat::from_integer(factorial(self.stride * k)))
    }

    pub fn total_weights(&self) -> Vec<R> {
        (0..=self.order()).map(|k| self.total_weight(k)).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Egf::with_stride(self.coeffs[..=order].to_vec(), self.stride)
    }

    fn check_stride(&self, other: &Self) -> Result<()> {
        if self.stride != other.stride {
            return Err(Error::StrideMismatch(self.stride, other.stride));
        }
        Ok(())
    }

    fn same_shape(&self, coeffs: Vec<R>) -> Self {
        Egf::with_stride(coeffs, self.stride)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_stride(other)?;
        let n = self.order().min(other.order());
        Ok(self.same_shape(
            (0..=n)
                .map(|i| self.coeffs[i].clone() + &other.coeffs[i])
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_stride(other)?;
        let n = self.order().min(other.order());
        Ok(self.same_shape(
            (0..=n)
                .map(|i| self.coeffs[i].clone() - &other.coeffs[i])
                .collect(),
        ))
    }

    pub fn neg(&self) -> Self {
        self.same_shape(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        self.same_shape(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    pub fn mul_ring(&self, c: &R) -> Self {
        self.same_shape(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_stride(other)?;
        let n = self.order().min(other.order());
        let mut out = vec![R::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = std::mem::replace(&mut out[i + j], R::zero()) + &(a.clone() * b);
            }
        }
        Ok(self.same_shape(out))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Egf::with_stride(Self::one(self.order()).coeffs, self.stride);
        for _ in 0..e {
            acc = acc.mul(self).expect("same stride");
        }
        acc
    }

    /// Substitution `outer(inner(z))`, truncated to the smaller order.
    ///
    /// `outer` is read as a function of one variable, so it must be
    /// uncompressed; the result inherits the stride of `inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        if outer.stride != 1 {
            return Err(Error::StrideMismatch(outer.stride, 1));
        }
        let n = outer.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner: (((o_n) * g + o_{n-1}) * g + ...) + o_0
        let mut acc = Egf::with_stride(vec![R::zero(); n + 1], inner.stride);
        for j in (0..=n).rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] = std::mem::replace(&mut acc.coeffs[0], R::zero()) + &outer.coeffs[j];
        }
        Ok(acc)
    }

    /// The series `b` with `self * b = 1`; requires `c_0 = 1`.
    pub fn mult_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.order();
        let mut b: Vec<R> = Vec::with_capacity(n + 1);
        b.push(R::one());
        for k in 1..=n {
            let mut s = R::zero();
            for i in 1..=k {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                s = s + &(self.coeffs[i].clone() * &b[k - i]);
            }
            b.push(-s);
        }
        Ok(self.same_shape(b))
    }

    /// The series `b` with `self(b(z)) = b(self(z)) = z`; requires
    /// `c_0 = 0`, `c_1 = 1` and no compression.
    ///
    /// Uses Lagrange inversion: writing `self = z h(z)`, the inverse has
    /// coefficients `[z^n] b = [z^{n-1}] h^{-n} / n`.
    pub fn comp_inverse(&self) -> Result<Self> {
        let n = self.order();
        if self.stride != 1
            || !self.coeffs[0].is_zero()
            || (n >= 1 && !self.coeffs[1].is_one())
        {
            return Err(Error::NotInvertibleForSubstitution);
        }
        let mut out = vec![R::zero(); n + 1];
        if n == 0 {
            return Ok(Egf::new(out));
        }
        let h = Egf::new(self.coeffs[1..].to_vec());
        let g = h.mult_inverse()?;
        let mut power = Egf::one(n - 1);
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            power = power.mul(&g)?;
            *slot = power.coeffs[k - 1].scale(&inv_int(k));
        }
        Ok(Egf::new(out))
    }

    /// Logarithm of a series with `c_0 = 1`, from `f' = a' / a`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.order();
        let mut f: Vec<R> = vec![R::zero(); n + 1];
        for k in 1..=n {
            let mut s = R::zero();
            for j in 1..k {
                if f[j].is_zero() || self.coeffs[k - j].is_zero() {
                    continue;
                }
                s = s + &(f[j].clone() * &self.coeffs[k - j]).scale(&BigRat::from_integer(j.into()));
            }
            f[k] = self.coeffs[k].clone() - &s.scale(&inv_int(k));
        }
        Ok(self.same_shape(f))
    }

    /// Exponential of a series with `c_0 = 0`, from `g' = a' g`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstantTerm);
        }
        let n = self.order();
        let mut g: Vec<R> = Vec::with_capacity(n + 1);
        g.push(R::one());
        for k in 1..=n {
            let mut s = R::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                s = s + &(self.coeffs[j].clone() * &g[k - j]).scale(&BigRat::from_integer(j.into()));
            }
            g.push(s.scale(&inv_int(k)));
        }
        Ok(self.same_shape(g))
    }

    /// `d/dz`; the order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::DerivativeOfOrderZero);
        }
        if self.stride != 1 {
            return Err(Error::StrideMismatch(self.stride, 1));
        }
        Ok(Egf::new(
            (1..=self.order())
                .map(|k| self.coeffs[k].scale(&BigRat::from_integer(k.into())))
                .collect(),
        ))
    }

    /// Keeps every `p`-th slot. All other slots must vanish.
    pub fn compress(&self, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("stride must be positive".into()));
        }
        if let Some((_, _)) = self
            .coeffs
            .iter()
            .enumerate()
            .find(|(k, c)| k % p != 0 && !c.is_zero())
        {
            return Err(Error::NotPeriodic(p));
        }
        let coeffs = self.coeffs.iter().step_by(p).cloned().collect();
        Ok(Egf::with_stride(coeffs, self.stride * p))
    }

    /// `{"ring":..,"order":N,"stride":p,"coeffs":[..]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "ring": R::TAG.as_str(),
            "order": self.order(),
            "stride": self.stride,
            "coeffs": self.coeffs.iter().map(Ring::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("series JSON: {why}"));
        let ring = v
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing ring"))?;
        let tag = RingTag::parse(ring)?;
        if tag != R::TAG {
            return Err(Error::RingMismatch {
                expected: R::TAG,
                found: tag,
            });
        }
        let stride = v.get("stride").and_then(Value::as_u64).unwrap_or(1) as usize;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing coeffs"))?
            .iter()
            .map(R::from_json)
            .collect::<Result<Vec<R>>>()?;
        if coeffs.is_empty() || stride == 0 {
            return Err(bad("empty series or zero stride"));
        }
        if let Some(order) = v.get("order").and_then(Value::as_u64) {
            if order as usize + 1 != coeffs.len() {
                return Err(bad("order does not match coefficient count"));
            }
        }
        Ok(Egf::with_stride(coeffs, stride))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rat;
    use num_traits::Zero;

    type S = Egf<BigRat>;

    fn q(s: &str) -> BigRat {
        parse_rat(s).unwrap()
    }

    fn ints(v: &[i64]) -> S {
        Egf::new(v.iter().map(|&c| BigRat::from_integer(c.into())).collect())
    }

    fn rats(v: &[&str]) -> S {
        Egf::new(v.iter().map(|s| q(s)).collect())
    }

    fn graphs(order: usize) -> S {
        Egf::from_total_weights(
            (0..=order)
                .map(|n| BigRat::from_integer(BigInt::from(2).pow((n * n.saturating_sub(1) / 2) as u32)))
                .collect(),
        )
    }

    #[test]
    fn product_truncates() {
        let a = ints(&[1, 1, 0, 0]);
        let b = ints(&[1, -1, 0, 0]);
        assert_eq!(a.mul(&b).unwrap(), ints(&[1, 0, -1, 0]));
        let short = ints(&[1, 1]);
        assert_eq!(a.mul(&short).unwrap().order(), 1);
    }

    #[test]
    fn l_times_inverse() {
        let l = StdSeries::L.series::<BigRat>(6);
        let inv = ints(&[1, -1, 0, 0, 0, 0, 0]);
        assert_eq!(l.mul(&inv).unwrap(), S::one(6));
        assert_eq!(l.mult_inverse().unwrap(), inv);
    }

    #[test]
    fn inverse_of_graph_series() {
        let d = graphs(4).mult_inverse().unwrap();
        assert_eq!(d.total_weights(), ints(&[1, -1, 0, -2, -24]).coeffs().to_vec());
        assert_eq!(S::one(3).mult_inverse().unwrap(), S::one(3));
        assert_eq!(ints(&[2, 1]).mult_inverse(), Err(Error::ConstantTermNotOne));
    }

    #[test]
    fn composition_basics() {
        let f = rats(&["3", "1/2", "-2", "5/7"]);
        assert_eq!(S::compose(&f, &S::z(3)).unwrap(), f);
        let e = StdSeries::E.series::<BigRat>(5);
        let c = StdSeries::C.series::<BigRat>(5);
        assert_eq!(S::compose(&e, &c).unwrap(), StdSeries::L.series(5));
        assert_eq!(
            S::compose(&e, &S::one(5)),
            Err(Error::NonZeroConstantTerm)
        );
    }

    #[test]
    fn e_plus_and_log_one_plus() {
        let e_plus = StdSeries::EPlus.series::<BigRat>(6);
        let log1p = e_plus.comp_inverse().unwrap();
        let expected: Vec<BigRat> = (0..=6)
            .map(|n| {
                if n == 0 {
                    BigRat::zero()
                } else {
                    let s = if n % 2 == 1 { 1 } else { -1 };
                    BigRat::new(s.into(), n.into())
                }
            })
            .collect();
        assert_eq!(log1p.coeffs(), &expected[..]);
        assert_eq!(S::compose(&e_plus, &log1p).unwrap(), S::z(6));
    }

    #[test]
    fn l_plus_inverse_alternates() {
        let inv = StdSeries::LPlus.series::<BigRat>(7).comp_inverse().unwrap();
        assert_eq!(inv, ints(&[0, 1, -1, 1, -1, 1, -1, 1]));
        assert_eq!(S::z(4).comp_inverse().unwrap(), S::z(4));
        assert_eq!(
            ints(&[0, 2, 1]).comp_inverse(),
            Err(Error::NotInvertibleForSubstitution)
        );
    }

    #[test]
    fn log_of_graphs_counts_connected() {
        let b = graphs(4).log().unwrap();
        assert_eq!(b.total_weights(), ints(&[0, 1, 1, 4, 38]).coeffs().to_vec());
    }

    #[test]
    fn exp_of_cycles_is_linear_orders() {
        let c = StdSeries::C.series::<BigRat>(8);
        assert_eq!(c.exp().unwrap(), StdSeries::L.series(8));
        assert_eq!(S::one(2).exp(), Err(Error::NonZeroConstantTerm));
    }

    #[test]
    fn derivatives() {
        let dl = StdSeries::L.series::<BigRat>(5).derivative().unwrap();
        assert_eq!(dl, ints(&[1, 2, 3, 4, 5]));
        let l = StdSeries::L.series::<BigRat>(4);
        assert_eq!(dl.truncate(4), l.mul(&l).unwrap());
        let e = StdSeries::E.series::<BigRat>(6);
        assert_eq!(e.derivative().unwrap(), e.truncate(5));
        assert_eq!(S::one(3).derivative().unwrap(), S::zero(2));
        assert_eq!(S::one(0).derivative(), Err(Error::DerivativeOfOrderZero));
    }

    #[test]
    fn compression() {
        // (6k-1)!! / (2k)! at even slots
        let weights: Vec<BigRat> = (0..=6)
            .map(|n| {
                if n % 2 == 1 {
                    BigRat::zero()
                } else {
                    BigRat::from_integer(crate::algebra::double_factorial(3 * n as i64 - 1).unwrap())
                }
            })
            .collect();
        let a = S::from_total_weights(weights);
        let c = a.compress(2).unwrap();
        assert_eq!(c.stride(), 2);
        assert_eq!(c.order(), 3);
        assert_eq!(&c.coeffs()[..3], &[q("1"), q("15/2"), q("10395/24")]);
        assert_eq!(c.total_weight(1), q("15"));
        assert_eq!(a.compress(1).unwrap(), a);
        assert_eq!(ints(&[1, 1, 1]).compress(2), Err(Error::NotPeriodic(2)));
    }

    #[test]
    fn stride_mismatch_rejected() {
        let a = ints(&[1, 0, 1, 0, 1]).compress(2).unwrap();
        let b = ints(&[1, 1, 1]);
        assert_eq!(a.mul(&b), Err(Error::StrideMismatch(2, 1)));
    }

    #[test]
    fn json_round_trip() {
        let a = rats(&["1", "-1/2", "0", "7/3"]);
        let v = a.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"coeffs":["1","-1/2","0","7/3"],"order":3,"ring":"rational","stride":1}"#
        );
        assert_eq!(S::from_json(&v).unwrap(), a);
        assert!(matches!(
            Egf::<crate::algebra::PolyQ>::from_json(&v),
            Err(Error::RingMismatch { .. })
        ));
    }
}
