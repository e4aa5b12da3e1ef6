//! Exact asymptotic expansions of the probability that a random labeled
//! structure is connected, or has a given number of components.
//!
//! The pipeline is: a model's total weights `a_n` ([`models`]) become a
//! truncated exponential generating series ([`egf`]); the species engine
//! ([`species`]) inverts the SET / SEQ / CYC decomposition and builds the
//! derived series whose coefficients `d_{k,m}` drive the expansion; the
//! evaluator ([`expansion`]) turns them into exact term values. Every
//! coefficient can be checked against exhaustive enumeration ([`oracle`]).

pub mod algebra;
pub mod egf;
mod error;
pub mod expansion;
pub mod models;
pub mod oracle;
pub mod species;
pub mod verify;

pub use algebra::{BigRat, PolyQ, Ring, RingTag, RingValue};
pub use egf::{Egf, StdSeries};
pub use error::{Error, Result};
pub use models::{ModelSpec, Rho};
pub use species::{DecompKind, ExpansionTable};
