//! Exact evaluation of the expansions at concrete sizes.
//!
//! For a model of stride `p` and raw size `n` (a multiple of `p`), term `k`
//! of the `m`-component expansion is
//!
//! ```text
//! d_{pk,m} * C(n, pk) * a_{n-pk} / a_n
//! ```
//!
//! For connectivity (`SET`, `m = 1`) the first term is 1 and the remaining
//! terms are `-(-d_{pk,1}) * ...`, so the raw `d` are exactly the signed
//! coefficients of the familiar `1 - sum ...` form.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{
    binomial, double_factorial, factorial, falling_factorial, rat_to_decimal, BigRat,
};
use crate::egf::Egf;
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::species::{components_from_connected, connected_series, derived_from_connected};

/// Residual-to-next-term bound used by [`convergence_report`]. An
/// engineering threshold, not a theorem.
pub const RESIDUAL_RATIO_BOUND: i64 = 10;

fn rat(n: BigInt) -> BigRat {
    BigRat::from_integer(n)
}

fn rat_u(n: usize) -> BigRat {
    BigRat::from_integer(n.into())
}

fn dec(r: &BigRat, digits: usize) -> Value {
    Value::String(rat_to_decimal(r, digits))
}

fn exact(r: &BigRat) -> Value {
    Value::String(r.to_string())
}

/// A numeric model with its series, connected series and weights cached up
/// to a maximal raw size.
#[derive(Debug, Clone)]
pub struct Evaluator {
    model: ModelSpec,
    rho: Option<BigRat>,
    stride: usize,
    connected: Egf<BigRat>,
    weights: Vec<BigRat>,
}

impl Evaluator {
    /// `rho` specializes a symbolic model; a model that stays symbolic is
    /// rejected.
    pub fn new(model: &ModelSpec, rho: Option<&BigRat>, size_max: usize) -> Result<Self> {
        let model = model.numeric(rho)?;
        let rho = match model.rho() {
            Some(crate::models::Rho::Value(r)) => Some(r.clone()),
            _ => None,
        };
        let stride = model.stride();
        let slots = size_max / stride;
        let a = model.series::<BigRat>(slots)?;
        let connected = connected_series(&a, model.kind())?;
        let weights = (0..=stride * slots)
            .map(|n| model.weight::<BigRat>(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator {
            model,
            rho,
            stride,
            connected,
            weights,
        })
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    pub fn size_max(&self) -> usize {
        self.weights.len() - 1
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if !n.is_multiple_of(self.stride) {
            return Err(Error::OffStride {
                size: n,
                stride: self.stride,
            });
        }
        if n > self.size_max() {
            return Err(Error::InvalidParameter(format!(
                "size {n} exceeds the evaluator range {}",
                self.size_max()
            )));
        }
        if self.weights[n].is_zero() {
            return Err(Error::ZeroWeight(n));
        }
        Ok(())
    }

    /// `d_{pk,m}` for `k = 0..=k_max`.
    pub fn d(&self, m: usize, k_max: usize) -> Result<Vec<BigRat>> {
        let k_max = k_max.min(self.connected.order());
        let b = self.connected.truncate(k_max);
        Ok(derived_from_connected(&b, self.model.kind(), m)?.total_weights())
    }

    /// Probability that a structure of raw size `n` has exactly `m`
    /// components.
    pub fn exact_probability(&self, m: usize, n: usize) -> Result<BigRat> {
        self.check_size(n)?;
        let slot = n / self.stride;
        let b = self.connected.truncate(slot);
        let count = components_from_connected(&b, self.model.kind(), m).total_weight(slot);
        Ok(count / &self.weights[n])
    }

    /// `C(n, pk) a_{n-pk} / a_n`, the factor multiplying `d_{pk,m}`.
    pub fn term_factor(&self, n: usize, k: usize) -> Result<BigRat> {
        self.check_size(n)?;
        let j = self.stride * k;
        if j > n {
            return Ok(BigRat::zero());
        }
        Ok(rat(binomial(n, j)) * &self.weights[n - j] / &self.weights[n])
    }

    pub fn evaluate(&self, m: usize, n: usize, order: usize) -> Result<ExpansionEvaluation> {
        self.check_size(n)?;
        if self.stride * order > n {
            return Err(Error::InvalidParameter(format!(
                "order {order} needs size at least {}",
                self.stride * order
            )));
        }
        let d = self.d(m, order)?;
        let terms = d
            .iter()
            .enumerate()
            .map(|(k, dk)| Ok(dk * self.term_factor(n, k)?))
            .collect::<Result<Vec<_>>>()?;
        let mut partial_sums = Vec::with_capacity(terms.len());
        let mut acc = BigRat::zero();
        for t in &terms {
            acc += t;
            partial_sums.push(acc.clone());
        }
        let exact = self.exact_probability(m, n)?;
        let residuals = partial_sums.iter().map(|s| &exact - s).collect();
        Ok(ExpansionEvaluation {
            model: self.model.id().to_string(),
            m,
            n,
            order,
            stride: self.stride,
            rho: self.rho.clone(),
            d,
            terms,
            partial_sums,
            exact: Some(exact),
            residuals,
        })
    }

    /// Leading term of the `m`-component expansion at raw size `n`, with
    /// the closed asymptotic form for the model family.
    pub fn leading_term(&self, m: usize, n: usize) -> Result<LeadingTerm> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        self.check_size(n)?;
        let p = self.stride;
        if self.weights.get(p).is_none_or(|w| w.is_zero()) {
            return Err(Error::InvalidParameter(format!(
                "leading-term law needs a_{p} != 0"
            )));
        }
        let k = m - 1;
        if p * k > n {
            return Err(Error::InvalidParameter(format!(
                "size {n} is below the leading index {}",
                p * k
            )));
        }
        let d = self.d(m, k)?;
        let value = &d[k] * self.term_factor(n, k)?;
        let (form, form_value) = self.asymptotic_form(m, n)?;
        Ok(LeadingTerm {
            model: self.model.id().to_string(),
            m,
            n,
            index: p * k,
            d: d[k].clone(),
            value,
            form,
            form_value,
        })
    }

    fn asymptotic_form(&self, m: usize, size: usize) -> Result<(String, BigRat)> {
        let k = m - 1;
        let n = size / self.stride;
        let nr = rat_u(n);
        let inv_fact = BigRat::new(BigInt::one(), factorial(k));
        let params = self.model.params_json();
        let param = |key: &str| params[key].as_u64().unwrap_or(0) as u32;
        let dfact = |x: i64| rat(double_factorial(x).expect("positive argument"));
        let q_form = |q: BigRat| -> BigRat {
            let num = Pow::pow(&q, n * k);
            let den = Pow::pow(&q, m * k / 2);
            num / den
        };
        let id = self.model.id();
        Ok(match id {
            "qss" => (
                "1/(m-1)! * (1/(4n))^(m-1)".into(),
                inv_fact * Pow::pow(BigRat::one() / (rat_u(4) * &nr), k),
            ),
            "p_angulations" | "triangulations" => {
                let pp = if id == "triangulations" { 3 } else { param("P") };
                if pp % 2 == 0 {
                    let base = dfact(pp as i64 - 1)
                        / (Pow::pow(rat_u(pp as usize), (pp / 2) as usize)
                            * Pow::pow(&nr, (pp / 2 - 1) as usize));
                    (
                        "1/(m-1)! * ((P-1)!!/P^(P/2) * 1/n^(P/2-1))^(m-1)".into(),
                        inv_fact * Pow::pow(base, k),
                    )
                } else {
                    let base = dfact(2 * pp as i64 - 1)
                        / (Pow::pow(rat_u(pp as usize), pp as usize)
                            * Pow::pow(rat_u(2), (pp - 1) as usize)
                            * Pow::pow(&nr, (pp - 2) as usize));
                    (
                        "1/(m-1)! * ((2P-1)!!/(P^P 2^(P-1)) * 1/n^(P-2))^(m-1), size = 2n".into(),
                        inv_fact * Pow::pow(base, k),
                    )
                }
            }
            "gem" => {
                let dim = param("D") as usize;
                let base = BigRat::one() / (Pow::pow(rat_u(2), dim) * Pow::pow(&nr, dim - 1));
                (
                    "1/(m-1)! * (1/(2^D n^(D-1)))^(m-1), size = 2n".into(),
                    inv_fact * Pow::pow(base, k),
                )
            }
            "simple_graphs" | "multigraphs" | "er" => {
                let q = BigRat::one() / &self.weights[2];
                (
                    "C(n,m-1) * q^(n(m-1)) / q^(m(m-1)/2), q = 1/(rho+1)".into(),
                    rat(binomial(n, k)) * q_form(q),
                )
            }
            "tournaments" | "tournaments_ties" => {
                let q = BigRat::one() / &self.weights[2];
                (
                    "m * (n)_(m-1) * q^(n(m-1)) / q^(m(m-1)/2), q = 1/(rho+1)".into(),
                    rat_u(m) * rat(falling_factorial(n, k)) * q_form(q),
                )
            }
            _ => {
                let p = self.stride;
                let kind = self.model.kind();
                let value = kind.leading_constant(m)
                    * rat(falling_factorial(size, p * k))
                    / Pow::pow(rat(factorial(p)), k)
                    * Pow::pow(&self.weights[p], k)
                    * &self.weights[size - p * k]
                    / &self.weights[size];
                (
                    "c(F) * (pn)_(p(m-1)) / (p!)^(m-1) * a_p^(m-1) a_(p(n-m+1)) / a_(pn)".into(),
                    value,
                )
            }
        })
    }

    /// Residual after `order` against the next term, for every size in
    /// `sizes` that is a multiple of the stride.
    pub fn convergence_report(
        &self,
        m: usize,
        sizes: RangeInclusive<usize>,
        order: usize,
    ) -> Result<ConvergenceReport> {
        let mut rows = Vec::new();
        for n in sizes.filter(|n| n % self.stride == 0) {
            let eval = self.evaluate(m, n, order)?;
            let residual = eval.residuals[order].clone();
            let d_next = self.d(m, order + 1)?;
            let next_term = d_next
                .get(order + 1)
                .map(|dk| Ok::<_, Error>(dk * self.term_factor(n, order + 1)?))
                .transpose()?
                .unwrap_or_else(BigRat::zero);
            let ratio = if next_term.is_zero() {
                if residual.is_zero() {
                    Some(BigRat::zero())
                } else {
                    None
                }
            } else {
                Some(residual.abs() / next_term.abs())
            };
            rows.push(ConvergenceRow {
                n,
                residual,
                next_term,
                ratio,
            });
        }
        let bound = rat_u(RESIDUAL_RATIO_BOUND as usize);
        let bounded = !rows.is_empty()
            && rows
                .iter()
                .all(|r| r.ratio.as_ref().is_some_and(|x| *x <= bound));
        Ok(ConvergenceReport {
            model: self.model.id().to_string(),
            m,
            order,
            bound,
            rows,
            bounded,
        })
    }
}

/// Term values, partial sums and residuals of one expansion at one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionEvaluation {
    pub model: String,
    pub m: usize,
    /// Raw structure size.
    pub n: usize,
    pub order: usize,
    pub stride: usize,
    pub rho: Option<BigRat>,
    /// `d_{pk,m}`, `k = 0..=order`.
    pub d: Vec<BigRat>,
    pub terms: Vec<BigRat>,
    pub partial_sums: Vec<BigRat>,
    pub exact: Option<BigRat>,
    /// `exact - partial_sums[j]`.
    pub residuals: Vec<BigRat>,
}

impl ExpansionEvaluation {
    pub fn to_json(&self, digits: usize) -> Value {
        let list = |v: &[BigRat]| v.iter().map(exact).collect::<Vec<_>>();
        let approx = |v: &[BigRat]| v.iter().map(|r| dec(r, digits)).collect::<Vec<_>>();
        json!({
            "model": self.model,
            "m": self.m,
            "n": self.n,
            "order": self.order,
            "stride": self.stride,
            "rho": self.rho.as_ref().map(exact),
            "d": list(&self.d),
            "terms": list(&self.terms),
            "partial_sums": list(&self.partial_sums),
            "exact": self.exact.as_ref().map(exact),
            "residuals": list(&self.residuals),
            "decimal": {
                "terms": approx(&self.terms),
                "partial_sums": approx(&self.partial_sums),
                "exact": self.exact.as_ref().map(|r| dec(r, digits)),
                "residuals": approx(&self.residuals),
            },
        })
    }

    pub const CSV_HEADER: &'static str = "model,m,n,order,d,term,partial_sum,exact,residual";

    /// One row per order `j = 0..=order`.
    pub fn csv_rows(&self) -> Vec<String> {
        let exact = self.exact.as_ref().map(|r| r.to_string()).unwrap_or_default();
        (0..self.terms.len())
            .map(|j| {
                format!(
                    "{},{},{},{},{},{},{},{},{}",
                    self.model,
                    self.m,
                    self.n,
                    j,
                    self.d[j],
                    self.terms[j],
                    self.partial_sums[j],
                    exact,
                    self.residuals[j]
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTerm {
    pub model: String,
    pub m: usize,
    pub n: usize,
    /// Raw index `p(m-1)` of the first nonzero coefficient.
    pub index: usize,
    pub d: BigRat,
    /// Exact value of the leading term at `n`.
    pub value: BigRat,
    pub form: String,
    pub form_value: BigRat,
}

impl LeadingTerm {
    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "model": self.model,
            "m": self.m,
            "n": self.n,
            "index": self.index,
            "d": exact(&self.d),
            "value": exact(&self.value),
            "value_decimal": dec(&self.value, digits),
            "form": self.form,
            "form_value": exact(&self.form_value),
            "form_value_decimal": dec(&self.form_value, digits),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub residual: BigRat,
    pub next_term: BigRat,
    /// `|residual| / |next_term|`; zero when both vanish, `None` when only
    /// the next term does.
    pub ratio: Option<BigRat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub model: String,
    pub m: usize,
    pub order: usize,
    pub bound: BigRat,
    pub rows: Vec<ConvergenceRow>,
    pub bounded: bool,
}

impl ConvergenceReport {
    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "model": self.model,
            "m": self.m,
            "order": self.order,
            "bound": exact(&self.bound),
            "bounded": self.bounded,
            "rows": self.rows.iter().map(|r| json!({
                "n": r.n,
                "residual": exact(&r.residual),
                "next_term": exact(&r.next_term),
                "ratio": r.ratio.as_ref().map(|x| dec(x, digits)),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn expansion_terms(
    model: &ModelSpec,
    m: usize,
    n: usize,
    order: usize,
    rho: Option<&BigRat>,
) -> Result<ExpansionEvaluation> {
    Evaluator::new(model, rho, n)?.evaluate(m, n, order)
}

pub fn exact_probability(
    model: &ModelSpec,
    m: usize,
    n: usize,
    rho: Option<&BigRat>,
) -> Result<BigRat> {
    Evaluator::new(model, rho, n)?.exact_probability(m, n)
}

pub fn leading_term(
    model: &ModelSpec,
    m: usize,
    n: usize,
    rho: Option<&BigRat>,
) -> Result<LeadingTerm> {
    Evaluator::new(model, rho, n)?.leading_term(m, n)
}

pub fn convergence_report(
    model: &ModelSpec,
    m: usize,
    sizes: RangeInclusive<usize>,
    order: usize,
    rho: Option<&BigRat>,
) -> Result<ConvergenceReport> {
    Evaluator::new(model, rho, *sizes.end())?.convergence_report(m, sizes, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rat;
    use crate::models::Rho;

    fn q(s: &str) -> BigRat {
        parse_rat(s).unwrap()
    }

    #[test]
    fn er_quarter_coefficients() {
        let er = ModelSpec::er(Rho::Symbolic);
        let e = expansion_terms(&er, 1, 20, 4, Some(&q("1/3"))).unwrap();
        let expected: Vec<_> = ["1", "-1", "2/3", "-10/27", "8/729"].iter().map(|s| q(s)).collect();
        assert_eq!(e.d, expected);
        assert_eq!(e.partial_sums[0], q("1"));
    }

    #[test]
    fn graphs_first_order() {
        let e = expansion_terms(&ModelSpec::simple_graphs(), 1, 10, 1, None).unwrap();
        assert_eq!(e.partial_sums[1], q("1") - q("10/512"));
    }

    #[test]
    fn triangulation_second_term() {
        let e = expansion_terms(&ModelSpec::triangulations(), 1, 20, 2, None).unwrap();
        let expected = q("-9045") * rat(binomial(20, 4)) * rat(double_factorial(47).unwrap())
            / rat(double_factorial(59).unwrap());
        assert_eq!(e.terms[2], expected);
        assert_eq!(e.d[1], q("-15"));
    }

    #[test]
    fn exact_probabilities() {
        let g = ModelSpec::simple_graphs();
        assert_eq!(exact_probability(&g, 1, 4, None).unwrap(), q("19/32"));
        assert_eq!(exact_probability(&g, 0, 0, None).unwrap(), q("1"));
        let er = ModelSpec::er(Rho::Symbolic);
        assert_eq!(exact_probability(&er, 1, 3, Some(&q("1"))).unwrap(), q("1/2"));
        assert!(exact_probability(&er, 1, 3, None).is_err());
        assert_eq!(
            exact_probability(&ModelSpec::triangulations(), 1, 3, None),
            Err(Error::OffStride { size: 3, stride: 2 })
        );
    }

    #[test]
    fn leading_forms() {
        let qss = leading_term(&ModelSpec::qss(), 2, 100, None).unwrap();
        assert_eq!(qss.form_value, q("1/400"));
        let gem = leading_term(&ModelSpec::gem(3).unwrap(), 2, 20, None).unwrap();
        assert_eq!(gem.form_value, q("1/800"));
        let ps = leading_term(&ModelSpec::p_angulations(4).unwrap(), 2, 30, None).unwrap();
        assert_eq!(ps.form_value, q("3/16") / q("30"));
        let g = leading_term(&ModelSpec::simple_graphs(), 2, 12, None).unwrap();
        assert_eq!(g.value, g.form_value);
        let t = leading_term(&ModelSpec::tournaments(), 3, 9, None).unwrap();
        assert_eq!(t.value, t.form_value);
        let c = leading_term(&ModelSpec::constant_test(), 2, 6, None).unwrap();
        assert_eq!(c.value, c.form_value);
    }

    #[test]
    fn convergence_of_graph_connectivity() {
        let r = convergence_report(&ModelSpec::simple_graphs(), 1, 10..=14, 3, None).unwrap();
        assert!(r.bounded);
        assert_eq!(r.rows.len(), 5);
    }

    #[test]
    fn residuals_step_by_terms() {
        let e = expansion_terms(&ModelSpec::simple_graphs(), 1, 6, 6, None).unwrap();
        for j in 0..6 {
            assert_eq!(&e.residuals[j] - &e.residuals[j + 1], e.terms[j + 1]);
        }
    }
}
