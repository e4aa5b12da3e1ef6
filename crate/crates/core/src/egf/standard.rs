use num_bigint::BigInt;
use num_traits::One;

use super::Egf;
use crate::algebra::{factorial, BigRat, Ring};

/// The elementary species used throughout the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StdSeries {
    /// Sets: `e^z`.
    E,
    /// Nonempty sets: `e^z - 1`.
    EPlus,
    /// Linear orders: `1 / (1 - z)`.
    L,
    /// Nonempty linear orders: `z / (1 - z)`.
    LPlus,
    /// Cycles: `log 1 / (1 - z)`.
    C,
    /// Singletons: `z`.
    Z,
    /// The empty structure: `1`.
    One,
}

impl StdSeries {
    /// Normalized coefficient `c_n`.
    pub fn coeff(self, n: usize) -> BigRat {
        let one = || BigRat::one();
        let zero = || BigRat::from_integer(0.into());
        match self {
            StdSeries::E => BigRat::new(BigInt::one(), factorial(n)),
            StdSeries::EPlus if n == 0 => zero(),
            StdSeries::EPlus => BigRat::new(BigInt::one(), factorial(n)),
            StdSeries::L => one(),
            StdSeries::LPlus if n == 0 => zero(),
            StdSeries::LPlus => one(),
            StdSeries::C if n == 0 => zero(),
            StdSeries::C => BigRat::new(BigInt::one(), n.into()),
            StdSeries::Z if n == 1 => one(),
            StdSeries::One if n == 0 => one(),
            StdSeries::Z | StdSeries::One => zero(),
        }
    }

    pub fn series<R: Ring>(self, order: usize) -> Egf<R> {
        Egf::new((0..=order).map(|n| R::from_rat(self.coeff(n))).collect())
    }
}
