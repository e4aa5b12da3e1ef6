//! From a model's total weights to connected components and expansion
//! coefficients.
//!
//! For a decomposition `A = F(B)` with `F` one of sets, sequences or cycles,
//! the coefficients `d_{k,m}` of the `m`-component expansion are the total
//! weights of the derived series
//!
//! | kind | `B` from `A`      | `D(m)`                            |
//! |------|-------------------|-----------------------------------|
//! | SET  | `log A`           | `B^{m-1}/(m-1)! * exp(-B)`        |
//! | SEQ  | `1 - 1/A`         | `m B^{m-1} (1-B)^2`               |
//! | CYC  | `1 - exp(-A)`     | `B^{m-1} (1-B)`                   |
//!
//! The engine reports raw `D(m)` coefficients; sign conventions for
//! presentation live in [`crate::expansion`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::algebra::{factorial, BigRat, Ring};
use crate::egf::{Egf, StdSeries};
use crate::error::{Error, Result};
use crate::models::ModelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecompKind {
    Set,
    Seq,
    Cyc,
}

impl DecompKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DecompKind::Set => "SET",
            DecompKind::Seq => "SEQ",
            DecompKind::Cyc => "CYC",
        }
    }

    /// Required value of `A_0`: 1 for SET and SEQ, 0 for CYC.
    pub fn required_constant(self) -> u8 {
        match self {
            DecompKind::Set | DecompKind::Seq => 1,
            DecompKind::Cyc => 0,
        }
    }

    /// The constant `c(F)` of the leading-term law.
    pub fn leading_constant(self, m: usize) -> BigRat {
        match self {
            DecompKind::Set => BigRat::new(BigInt::one(), factorial(m.saturating_sub(1))),
            DecompKind::Seq => BigRat::from_integer(m.into()),
            DecompKind::Cyc => BigRat::one(),
        }
    }

    fn check<R: Ring>(self, a: &Egf<R>) -> Result<()> {
        let c0 = a.coeff(0);
        let ok = match self {
            DecompKind::Set | DecompKind::Seq => c0.is_one(),
            DecompKind::Cyc => c0.is_zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ConstantTermCondition {
                kind: self.as_str(),
                expected: self.required_constant(),
            })
        }
    }
}

impl fmt::Display for DecompKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn one_like<R: Ring>(a: &Egf<R>) -> Egf<R> {
    Egf::with_stride(Egf::<R>::one(a.order()).coeffs().to_vec(), a.stride())
}

/// The series `B` of connected (SET), irreducible (SEQ) or cycle-content
/// (CYC) structures.
pub fn connected_series<R: Ring>(a: &Egf<R>, kind: DecompKind) -> Result<Egf<R>> {
    kind.check(a)?;
    match kind {
        DecompKind::Set => a.log(),
        DecompKind::Seq => one_like(a).sub(&a.mult_inverse()?),
        DecompKind::Cyc => one_like(a).sub(&a.neg().exp()?),
    }
}

/// The derived series `D(m)` whose total weights are the `d_{k,m}`.
pub fn derived_series<R: Ring>(a: &Egf<R>, kind: DecompKind, m: usize) -> Result<Egf<R>> {
    derived_from_connected(&connected_series(a, kind)?, kind, m)
}

/// `D(m)` from an already inverted connected series `b`.
pub fn derived_from_connected<R: Ring>(b: &Egf<R>, kind: DecompKind, m: usize) -> Result<Egf<R>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let b_pow = b.pow(m - 1);
    match kind {
        DecompKind::Set => {
            let inv_fact = BigRat::new(BigInt::one(), factorial(m - 1));
            b_pow.scale(&inv_fact).mul(&b.neg().exp()?)
        }
        DecompKind::Seq => {
            let one_minus_b = one_like(b).sub(b)?;
            b_pow
                .mul(&one_minus_b.mul(&one_minus_b)?)
                .map(|s| s.scale(&BigRat::from_integer(m.into())))
        }
        DecompKind::Cyc => b_pow.mul(&one_like(b).sub(b)?),
    }
}

/// The exact series of structures with exactly `m` components, `F_m(B)`.
pub fn component_series<R: Ring>(a: &Egf<R>, kind: DecompKind, m: usize) -> Result<Egf<R>> {
    Ok(components_from_connected(&connected_series(a, kind)?, kind, m))
}

/// `F_m(b)` for an already inverted connected series `b`.
pub fn components_from_connected<R: Ring>(b: &Egf<R>, kind: DecompKind, m: usize) -> Egf<R> {
    let b_pow = b.pow(m);
    match kind {
        DecompKind::Set => b_pow.scale(&BigRat::new(BigInt::one(), factorial(m))),
        DecompKind::Seq => b_pow,
        DecompKind::Cyc if m == 0 => Egf::with_stride(vec![R::zero(); b.order() + 1], b.stride()),
        DecompKind::Cyc => b_pow.scale(&BigRat::new(BigInt::one(), m.into())),
    }
}

/// `D(1)` for a SET decomposition computed through the anti-SEQ operator,
/// `1 - L_+^{(-1)}(A_+)`, without passing through `B`.
pub fn anti_seq_series<R: Ring>(a: &Egf<R>) -> Result<Egf<R>> {
    DecompKind::Set.check(a)?;
    let a_plus = a.sub(&one_like(a))?;
    let anti_seq = StdSeries::LPlus.series::<R>(a.order()).comp_inverse()?;
    one_like(a).sub(&Egf::compose(&anti_seq, &a_plus)?)
}

/// Coefficients of the `m`-component expansion of one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTable<R> {
    pub model: String,
    pub m: usize,
    pub stride: usize,
    /// `d[k]` is `d_{pk,m}`.
    pub d: Vec<R>,
}

impl<R: Ring> ExpansionTable<R> {
    /// Builds the table directly from a (possibly compressed) series.
    pub fn from_series(model: &str, a: &Egf<R>, kind: DecompKind, m: usize) -> Result<Self> {
        let d = derived_series(a, kind, m)?;
        Ok(ExpansionTable {
            model: model.to_string(),
            m,
            stride: a.stride(),
            d: d.total_weights(),
        })
    }

    /// Index (in stride units) and value of the first nonzero entry.
    pub fn leading_entry(&self) -> Option<(usize, &R)> {
        self.d.iter().enumerate().find(|(_, v)| !v.is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model,
            "m": self.m,
            "stride": self.stride,
            "d": self.d.iter().map(Ring::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `d_{pk,m}` for `k = 0..=k_max`, where `p` is the model's stride.
pub fn d_coefficients<R: Ring>(
    model: &ModelSpec,
    m: usize,
    k_max: usize,
) -> Result<ExpansionTable<R>> {
    let a = model.series::<R>(k_max)?;
    ExpansionTable::from_series(model.id(), &a, model.kind(), m)
}

/// True iff `E^{-1}(E_+^{(-1)})` and `1 - L_+^{(-1)}` agree through `order`.
pub fn equipotence_check(order: usize) -> bool {
    let lhs = (|| {
        let e_inv = StdSeries::E.series::<BigRat>(order).mult_inverse()?;
        let log1p = StdSeries::EPlus.series::<BigRat>(order).comp_inverse()?;
        Egf::compose(&e_inv, &log1p)
    })();
    let rhs = (|| {
        let anti_seq = StdSeries::LPlus.series::<BigRat>(order).comp_inverse()?;
        Egf::<BigRat>::one(order).sub(&anti_seq)
    })();
    matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
}

/// Largest `p` in `1..=8` such that the weights vanish off multiples of `p`
/// and are nonzero at multiples of `p` over the upper half of the window.
/// `None` when no such `p` exists.
pub fn infer_stride<R: Ring>(weights: &[R]) -> Option<usize> {
    let n = weights.len();
    (1..=8usize).rev().find(|&p| {
        let off_ok = weights
            .iter()
            .enumerate()
            .all(|(k, w)| k % p == 0 || w.is_zero());
        let tail_ok = (n / 2..n)
            .filter(|k| k % p == 0 && *k > 0)
            .all(|k| !weights[k].is_zero());
        let has_tail = (n / 2..n).any(|k| k % p == 0 && k > 0);
        off_ok && tail_ok && has_tail
    })
}
