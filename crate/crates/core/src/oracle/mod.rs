//! Ground truth by exhaustive enumeration of small labeled graphs and
//! tournaments with ties.
//!
//! Graphs carry weight `rho^{#edges}`, tournaments with ties carry
//! `(rho - 1)^{#ties}`. Everything here is computed without the series
//! engine, so it can be compared against it.

mod enumerate;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{binomial, BigRat, PolyQ, Ring};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::species::{component_series, DecompKind};

pub use enumerate::scc_count;

pub const DEFAULT_GRAPH_CAP: usize = 6;
pub const DEFAULT_TIE_CAP: usize = 5;

/// Total weight of the structures on `[k]`, bucketed by number of
/// components (graphs) or strongly connected components (tournaments).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentHistogram {
    pub k: usize,
    pub buckets: BTreeMap<usize, PolyQ>,
}

impl ComponentHistogram {
    fn from_counts(k: usize, counts: &enumerate::Counts, unit: &PolyQ) -> Self {
        let mut buckets: BTreeMap<usize, PolyQ> = BTreeMap::new();
        for (&(comps, marked), &n) in counts {
            let term = unit.pow(marked).scale(&BigRat::from_integer(n.into()));
            let slot = buckets.entry(comps).or_insert_with(PolyQ::zero);
            *slot = &*slot + &term;
        }
        ComponentHistogram { k, buckets }
    }

    pub fn bucket(&self, components: usize) -> PolyQ {
        self.buckets.get(&components).cloned().unwrap_or_else(PolyQ::zero)
    }

    /// Sum over all buckets.
    pub fn mass(&self) -> PolyQ {
        self.buckets.values().fold(PolyQ::zero(), |acc, p| acc + p)
    }

    pub fn to_json(&self) -> Value {
        let buckets: serde_json::Map<String, Value> = self
            .buckets
            .iter()
            .map(|(c, p)| (c.to_string(), Value::String(p.to_string())))
            .collect();
        json!({ "k": self.k, "buckets": buckets })
    }
}

/// Enumeration settings: size caps and worker threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    pub graph_cap: usize,
    pub tie_cap: usize,
    pub threads: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            graph_cap: DEFAULT_GRAPH_CAP,
            tie_cap: DEFAULT_TIE_CAP,
            threads: 1,
        }
    }
}

fn check_size(k: usize, cap: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("enumeration size must be at least 1".into()));
    }
    if k > cap {
        return Err(Error::OverCap { size: k, cap });
    }
    Ok(())
}

fn rat(n: BigInt) -> BigRat {
    BigRat::from_integer(n)
}

fn sign(e: usize) -> BigRat {
    if e.is_multiple_of(2) {
        BigRat::one()
    } else {
        -BigRat::one()
    }
}

impl Oracle {
    pub fn with_threads(threads: usize) -> Self {
        Oracle {
            threads: threads.max(1),
            ..Oracle::default()
        }
    }

    /// Graphs on `[k]` with weight `rho^{#edges}`, by number of components.
    pub fn enumerate_graph_components(&self, k: usize) -> Result<ComponentHistogram> {
        check_size(k, self.graph_cap)?;
        let counts = enumerate::graph_counts(k, self.threads);
        Ok(ComponentHistogram::from_counts(k, &counts, &PolyQ::rho()))
    }

    /// Tournaments with ties on `[k]` with weight `(rho-1)^{#ties}`, by
    /// number of strongly connected components.
    pub fn enumerate_tournament_components(&self, k: usize) -> Result<ComponentHistogram> {
        check_size(k, self.tie_cap)?;
        let counts = enumerate::tie_counts(k, self.threads);
        Ok(ComponentHistogram::from_counts(k, &counts, &PolyQ::from_ints(&[-1, 1])))
    }

    /// `P_{k,m}(rho) = sum_g (-1)^{pi0(g)-(m-1)} C(pi0(g), m-1) w(g)` over
    /// graphs on `[k]`.
    pub fn p_polynomial(&self, k: usize, m: usize) -> Result<PolyQ> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if k == 0 {
            // only the empty graph, with no components
            return Ok(if m == 1 { PolyQ::one() } else { PolyQ::zero() });
        }
        let hist = self.enumerate_graph_components(k)?;
        let mut total = PolyQ::zero();
        for (&c, w) in &hist.buckets {
            if c + 1 < m {
                continue;
            }
            let coef = sign(c + 1 - m) * rat(binomial(c, m - 1));
            total = total + w.scale(&coef);
        }
        Ok(total)
    }

    /// Weighted difference between graphs on `[k]` with an odd and with an
    /// even number of components.
    pub fn parity_difference(&self, k: usize) -> Result<PolyQ> {
        let hist = self.enumerate_graph_components(k)?;
        Ok(hist
            .buckets
            .iter()
            .fold(PolyQ::zero(), |acc, (&c, w)| acc + w.scale(&sign(c + 1))))
    }

    /// `it_n^{(j)}` for `n <= k`, `j <= k + 1`: total weight of sequences of
    /// `j` irreducible tournaments with ties on `[n]`, built by convolving
    /// the irreducible buckets over ordered label splits.
    pub fn sequence_weights(&self, k: usize) -> Result<Vec<Vec<PolyQ>>> {
        let mut irreducible = vec![PolyQ::zero()];
        for n in 1..=k {
            irreducible.push(self.enumerate_tournament_components(n)?.bucket(1));
        }
        let mut seq = vec![vec![PolyQ::zero(); k + 1]; k + 2];
        seq[0][0] = PolyQ::one();
        for j in 1..k + 2 {
            for n in 0..=k {
                let mut acc = PolyQ::zero();
                for i in 1..=n {
                    let prev = &seq[j - 1][n - i];
                    if prev.is_zero() {
                        continue;
                    }
                    acc = acc + (&irreducible[i] * prev).scale(&rat(binomial(n, i)));
                }
                seq[j][n] = acc;
            }
        }
        Ok(seq)
    }

    /// `Q_{k,m}(rho) = m (it_k^{(m-1)} - 2 it_k^{(m)} + it_k^{(m+1)})`.
    pub fn q_polynomial(&self, k: usize, m: usize) -> Result<PolyQ> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let seq = self.sequence_weights(k)?;
        let it = |j: usize| seq.get(j).map(|row| row[k].clone()).unwrap_or_else(PolyQ::zero);
        let two = BigRat::from_integer(2.into());
        let inner = it(m - 1) - it(m).scale(&two) + it(m + 1);
        Ok(inner.scale(&rat(m.into())))
    }

    /// Checks that convolving irreducible buckets reproduces the direct SCC
    /// buckets for every size up to `k`.
    pub fn sequence_buckets_agree(&self, k: usize) -> Result<bool> {
        let seq = self.sequence_weights(k)?;
        for n in 1..=k {
            let hist = self.enumerate_tournament_components(n)?;
            for (j, row) in seq.iter().enumerate() {
                if row[n] != hist.bucket(j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Parity difference for any numeric SET model, read from its exact
/// component series instead of enumeration.
pub fn parity_difference_from_series(model: &ModelSpec, k: usize) -> Result<BigRat> {
    if model.kind() != DecompKind::Set {
        return Err(Error::InvalidParameter(format!(
            "parity difference needs a SET model, `{}` is {}",
            model.id(),
            model.kind()
        )));
    }
    let p = model.stride();
    if !k.is_multiple_of(p) {
        return Err(Error::OffStride { size: k, stride: p });
    }
    let slot = k / p;
    let a = model.series::<BigRat>(slot)?;
    let mut total = BigRat::zero();
    for c in 1..=k {
        let w = component_series(&a, DecompKind::Set, c)?.total_weight(slot);
        total += sign(c + 1) * w;
    }
    Ok(total)
}

/// The same structure counts read at `rho = 1` as integers.
pub fn count_at_one(p: &PolyQ) -> BigInt {
    let v = p.eval(&BigRat::one());
    assert!(v.is_integer());
    v.to_integer()
}

/// `(rho+1)^{C(k,2)}`.
pub fn er_mass(k: usize) -> PolyQ {
    PolyQ::from_ints(&[1, 1]).pow(k * k.saturating_sub(1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> PolyQ {
        s.parse().unwrap()
    }

    #[test]
    fn graph_histogram_of_three_vertices() {
        let h = Oracle::default().enumerate_graph_components(3).unwrap();
        assert_eq!(h.bucket(1), poly("rho^3+3rho^2"));
        assert_eq!(h.bucket(2), poly("3rho"));
        assert_eq!(h.bucket(3), poly("1"));
        assert_eq!(h.buckets.len(), 3);
        assert_eq!(
            h.to_json().to_string(),
            r#"{"buckets":{"1":"rho^3+3rho^2","2":"3rho","3":"1"},"k":3}"#
        );
    }

    #[test]
    fn tie_histograms() {
        let o = Oracle::default();
        let h2 = o.enumerate_tournament_components(2).unwrap();
        assert_eq!(h2.bucket(1), poly("rho-1"));
        assert_eq!(h2.bucket(2), poly("2"));
        let h3 = o.enumerate_tournament_components(3).unwrap();
        assert_eq!(h3.bucket(1), poly("rho^3+3rho^2-3rho+1"));
        assert_eq!(o.enumerate_tournament_components(1).unwrap().bucket(1), poly("1"));
    }

    #[test]
    fn caps() {
        let o = Oracle::default();
        assert_eq!(
            o.enumerate_graph_components(7),
            Err(Error::OverCap { size: 7, cap: 6 })
        );
        assert!(o.enumerate_tournament_components(6).is_err());
        assert!(o.enumerate_graph_components(0).is_err());
    }

    #[test]
    fn p_and_q_samples() {
        let o = Oracle::default();
        assert_eq!(o.p_polynomial(3, 1).unwrap(), poly("-rho^3-3rho^2+3rho-1"));
        assert_eq!(o.p_polynomial(4, 3).unwrap(), poly("4rho^3+15rho^2-18rho+6"));
        assert_eq!(o.p_polynomial(0, 1).unwrap(), poly("1"));
        assert_eq!(o.q_polynomial(2, 2).unwrap(), poly("2rho-10"));
        assert_eq!(o.q_polynomial(3, 3).unwrap(), poly("18rho-54"));
        assert_eq!(o.q_polynomial(0, 1).unwrap(), poly("1"));
    }

    #[test]
    fn parity() {
        let o = Oracle::default();
        let at_one = |k| count_at_one(&o.parity_difference(k).unwrap());
        assert_eq!(at_one(3), 2.into());
        assert_eq!(at_one(2), 0.into());
        assert_eq!(at_one(1), 1.into());
        let g = ModelSpec::simple_graphs();
        assert_eq!(parity_difference_from_series(&g, 3).unwrap(), BigRat::from_integer(2.into()));
        assert!(parity_difference_from_series(&ModelSpec::tournaments(), 3).is_err());
    }

    #[test]
    fn two_ways_of_counting_sequences() {
        assert!(Oracle::default().sequence_buckets_agree(4).unwrap());
    }

    #[test]
    fn irreducible_tournament_counts() {
        let o = Oracle::default();
        let it: Vec<BigInt> = (1..=4)
            .map(|k| count_at_one(&o.enumerate_tournament_components(k).unwrap().bucket(1)))
            .collect();
        // at rho = 1 ties have weight 0, leaving plain tournaments
        assert_eq!(it, vec![1.into(), 0.into(), 2.into(), 24.into()]);
    }
}
