//! Catalog of structure families and their exact total weights.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{
    double_factorial, factorial, rat_to_decimal, BigRat, PolyQ, Ring, RingTag, RingValue,
};
use crate::egf::Egf;
use crate::error::{Error, Result};
use crate::species::DecompKind;

/// Value of the edge/tie weight `rho = p / (1 - p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rho {
    Symbolic,
    Value(BigRat),
}

impl Rho {
    /// `rho = p / (1 - p)` for a probability `0 < p < 1`.
    pub fn from_probability(p: &BigRat) -> Result<Self> {
        if !p.is_positive() || *p >= BigRat::one() {
            return Err(Error::InvalidParameter(format!(
                "edge probability must lie in (0, 1), got {p}"
            )));
        }
        Ok(Rho::Value(p / (BigRat::one() - p)))
    }

    pub fn value(r: BigRat) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {r}")));
        }
        Ok(Rho::Value(r))
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Symbolic => f.write_str("rho"),
            Rho::Value(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Family {
    SimpleGraphs,
    Multigraphs { d: u32 },
    ErdosRenyi { rho: Rho },
    Tournaments,
    TournamentsTies { rho: Rho },
    Qss,
    PAngulations { polygon: u32 },
    Gem { dim: u32 },
    NonemptyGraphsCyc,
    ConstantTest,
}

/// A named structure family: total weights, decomposition kind, stride.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    id: String,
    family: Family,
}

/// Optional parameters accepted by [`ModelSpec::from_id`].
#[derive(Debug, Clone, Default)]
pub struct ModelParams {
    pub rho: Option<Rho>,
    /// Polygon perimeter for P-angulations.
    pub polygon: Option<u32>,
    /// Dimension for graph encoded manifolds.
    pub dim: Option<u32>,
    /// Edge multiplicity for multigraphs.
    pub d: Option<u32>,
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn int_pow(base: u32, e: usize) -> BigInt {
    Pow::pow(BigInt::from(base), e)
}

impl ModelSpec {
    fn make(id: &str, family: Family) -> Self {
        ModelSpec {
            id: id.to_string(),
            family,
        }
    }

    pub fn simple_graphs() -> Self {
        Self::make("simple_graphs", Family::SimpleGraphs)
    }

    pub fn multigraphs(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("multigraphs need d >= 1".into()));
        }
        Ok(Self::make("multigraphs", Family::Multigraphs { d }))
    }

    pub fn er(rho: Rho) -> Self {
        Self::make("er", Family::ErdosRenyi { rho })
    }

    pub fn tournaments() -> Self {
        Self::make("tournaments", Family::Tournaments)
    }

    pub fn tournaments_ties(rho: Rho) -> Self {
        Self::make("tournaments_ties", Family::TournamentsTies { rho })
    }

    pub fn qss() -> Self {
        Self::make("qss", Family::Qss)
    }

    pub fn p_angulations(polygon: u32) -> Result<Self> {
        if polygon < 3 {
            return Err(Error::InvalidParameter(format!(
                "p_angulations need P >= 3, got {polygon}"
            )));
        }
        Ok(Self::make("p_angulations", Family::PAngulations { polygon }))
    }

    /// P-angulations with `P = 3`.
    pub fn triangulations() -> Self {
        Self::make("triangulations", Family::PAngulations { polygon: 3 })
    }

    pub fn gem(dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("gem needs D >= 2, got {dim}")));
        }
        Ok(Self::make("gem", Family::Gem { dim }))
    }

    /// Nonempty graphs read through a cycle decomposition `A = C(B)`.
    /// `B` is virtual; the model exercises the CYC route of the engine.
    pub fn nonempty_graphs_cyc() -> Self {
        Self::make("nonempty_graphs_cyc", Family::NonemptyGraphsCyc)
    }

    /// `a_n = n!`, i.e. constant normalized sequence; never gargantuan.
    pub fn constant_test() -> Self {
        Self::make("constant_test", Family::ConstantTest)
    }

    /// Looks a model up by catalog id. Missing optional parameters fall
    /// back to: `rho` symbolic, `d = 1`; `P` and `D` are required.
    pub fn from_id(id: &str, params: &ModelParams) -> Result<Self> {
        let rho = || params.rho.clone().unwrap_or(Rho::Symbolic);
        let required = |v: Option<u32>, name: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("model `{id}` requires --{name}")))
        };
        match id {
            "simple_graphs" => Ok(Self::simple_graphs()),
            "multigraphs" => Self::multigraphs(params.d.unwrap_or(1)),
            "er" => Ok(Self::er(rho())),
            "tournaments" => Ok(Self::tournaments()),
            "tournaments_ties" | "ties" => Ok(Self::tournaments_ties(rho())),
            "qss" => Ok(Self::qss()),
            "p_angulations" => Self::p_angulations(required(params.polygon, "P")?),
            "triangulations" => Ok(Self::triangulations()),
            "gem" => Self::gem(required(params.dim, "D")?),
            "nonempty_graphs_cyc" => Ok(Self::nonempty_graphs_cyc()),
            "constant_test" => Ok(Self::constant_test()),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> DecompKind {
        match self.family {
            Family::Tournaments | Family::TournamentsTies { .. } | Family::ConstantTest => {
                DecompKind::Seq
            }
            Family::NonemptyGraphsCyc => DecompKind::Cyc,
            _ => DecompKind::Set,
        }
    }

    pub fn stride(&self) -> usize {
        match self.family {
            Family::PAngulations { polygon } if polygon % 2 == 1 => 2,
            Family::Gem { .. } => 2,
            _ => 1,
        }
    }

    pub fn rho(&self) -> Option<&Rho> {
        match &self.family {
            Family::ErdosRenyi { rho } | Family::TournamentsTies { rho } => Some(rho),
            _ => None,
        }
    }

    pub fn is_weighted(&self) -> bool {
        self.rho().is_some()
    }

    pub fn ring(&self) -> RingTag {
        match self.rho() {
            Some(Rho::Symbolic) => RingTag::PolynomialInRho,
            _ => RingTag::Rational,
        }
    }

    /// Replaces a symbolic `rho` by a value; other models are returned
    /// unchanged.
    pub fn with_rho(&self, value: BigRat) -> Result<Self> {
        let rho = Rho::value(value)?;
        let family = match &self.family {
            Family::ErdosRenyi { .. } => Family::ErdosRenyi { rho },
            Family::TournamentsTies { .. } => Family::TournamentsTies { rho },
            other => other.clone(),
        };
        Ok(ModelSpec {
            id: self.id.clone(),
            family,
        })
    }

    /// Specializes a symbolic model at `rho` if given; errors if the model
    /// stays symbolic.
    pub fn numeric(&self, rho: Option<&BigRat>) -> Result<Self> {
        let m = match rho {
            Some(r) if self.is_weighted() => self.with_rho(r.clone())?,
            _ => self.clone(),
        };
        if m.ring() != RingTag::Rational {
            return Err(Error::InvalidParameter(format!(
                "model `{}` is symbolic in rho; supply a value",
                m.id
            )));
        }
        Ok(m)
    }

    /// Exact total weight `a_n`.
    pub fn weight_sequence(&self, n: usize) -> RingValue {
        let int = |x: BigInt| RingValue::Rational(BigRat::from_integer(x));
        let er_weight = |rho: &Rho| match rho {
            Rho::Symbolic => RingValue::Poly(PolyQ::from_ints(&[1, 1]).pow(choose2(n))),
            Rho::Value(r) => RingValue::Rational(Pow::pow(r + BigRat::one(), choose2(n))),
        };
        match &self.family {
            Family::SimpleGraphs | Family::Tournaments => int(int_pow(2, choose2(n))),
            Family::Multigraphs { d } => int(int_pow(d + 1, choose2(n))),
            Family::ErdosRenyi { rho } | Family::TournamentsTies { rho } => er_weight(rho),
            Family::Qss => int(Pow::pow(dfact(2 * n as i64 - 1), 2u32)),
            Family::PAngulations { polygon } => {
                let sides = *polygon as i64 * n as i64;
                if sides % 2 == 1 {
                    int(BigInt::zero())
                } else {
                    int(dfact(sides - 1))
                }
            }
            Family::Gem { dim } => {
                if n % 2 == 1 {
                    int(BigInt::zero())
                } else {
                    int(Pow::pow(dfact(n as i64 - 1), dim + 1))
                }
            }
            Family::NonemptyGraphsCyc => {
                if n == 0 {
                    int(BigInt::zero())
                } else {
                    int(int_pow(2, choose2(n)))
                }
            }
            Family::ConstantTest => int(factorial(n)),
        }
    }

    pub fn weight<R: Ring>(&self, n: usize) -> Result<R> {
        R::from_value(self.weight_sequence(n))
    }

    /// The model's series compressed by its stride, with slots `0..=k_max`
    /// (raw sizes up to `stride * k_max`).
    pub fn series<R: Ring>(&self, k_max: usize) -> Result<Egf<R>> {
        let p = self.stride();
        let weights = (0..=p * k_max)
            .map(|n| self.weight::<R>(n))
            .collect::<Result<Vec<R>>>()?;
        Egf::from_total_weights(weights).compress(p)
    }

    pub fn params_json(&self) -> Value {
        match &self.family {
            Family::Multigraphs { d } => json!({ "d": d }),
            Family::ErdosRenyi { rho } | Family::TournamentsTies { rho } => {
                json!({ "rho": rho.to_string() })
            }
            Family::PAngulations { polygon } => json!({ "P": polygon }),
            Family::Gem { dim } => json!({ "D": dim }),
            _ => json!({}),
        }
    }
}

fn dfact(n: i64) -> BigInt {
    double_factorial(n).expect("argument is at least -1")
}

/// One catalog entry with its parameter schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub kind: DecompKind,
    pub stride: &'static str,
    pub weights: &'static str,
    pub params: Vec<(&'static str, &'static str)>,
}

impl CatalogEntry {
    pub fn to_json(&self) -> Value {
        let params: serde_json::Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect();
        json!({
            "id": self.id,
            "kind": self.kind.as_str(),
            "stride": self.stride,
            "weights": self.weights,
            "params": params,
        })
    }
}

/// Deterministic listing of every model, sorted by id.
pub fn list_models() -> Vec<CatalogEntry> {
    let rho = ("rho", "exact rational > 0, or symbolic when omitted (--p gives rho = p/(1-p))");
    let mut entries = vec![
        CatalogEntry {
            id: "constant_test",
            kind: DecompKind::Seq,
            stride: "1",
            weights: "n!",
            params: vec![],
        },
        CatalogEntry {
            id: "er",
            kind: DecompKind::Set,
            stride: "1",
            weights: "(rho+1)^C(n,2)",
            params: vec![rho],
        },
        CatalogEntry {
            id: "gem",
            kind: DecompKind::Set,
            stride: "2",
            weights: "((n-1)!!)^(D+1) for even n, else 0",
            params: vec![("D", "integer >= 2 (required)")],
        },
        CatalogEntry {
            id: "multigraphs",
            kind: DecompKind::Set,
            stride: "1",
            weights: "(d+1)^C(n,2)",
            params: vec![("d", "integer >= 1 (default 1)")],
        },
        CatalogEntry {
            id: "nonempty_graphs_cyc",
            kind: DecompKind::Cyc,
            stride: "1",
            weights: "2^C(n,2) for n >= 1, 0 at n = 0",
            params: vec![],
        },
        CatalogEntry {
            id: "p_angulations",
            kind: DecompKind::Set,
            stride: "1 if P even, 2 if P odd",
            weights: "(Pn-1)!! when Pn is even, else 0",
            params: vec![("P", "integer >= 3 (required)")],
        },
        CatalogEntry {
            id: "qss",
            kind: DecompKind::Set,
            stride: "1",
            weights: "((2n-1)!!)^2",
            params: vec![],
        },
        CatalogEntry {
            id: "simple_graphs",
            kind: DecompKind::Set,
            stride: "1",
            weights: "2^C(n,2)",
            params: vec![],
        },
        CatalogEntry {
            id: "tournaments",
            kind: DecompKind::Seq,
            stride: "1",
            weights: "2^C(n,2)",
            params: vec![],
        },
        CatalogEntry {
            id: "tournaments_ties",
            kind: DecompKind::Seq,
            stride: "1",
            weights: "(rho+1)^C(n,2), tie weight rho-1",
            params: vec![rho],
        },
        CatalogEntry {
            id: "triangulations",
            kind: DecompKind::Set,
            stride: "2",
            weights: "(3n-1)!! for even n, else 0",
            params: vec![],
        },
    ];
    entries.sort_by_key(|e| e.id);
    entries
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Finite-window diagnostic for the growth conditions behind the
/// expansions. A `pass` only means no violation was seen in the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GargantuanReport {
    pub model: String,
    pub n_max: usize,
    pub stride: usize,
    pub rho: Option<BigRat>,
    /// `k u_{k-1} / u_k` for `k = 1..=K` on the normalized (compressed)
    /// sequence `u_k = |a_{pk}| / (pk)!`; `None` where `u_k = 0`.
    pub cond_i_ratios: Vec<Option<BigRat>>,
    /// The ratio sequence failed to be non-increasing over the last quarter.
    pub cond_i_flagged: bool,
    /// Pairs `(n, k)` with `x_{k+1} > x_k`, `x_k = u_k u_{n-k}`, `k+1 <= n/2`,
    /// for `n` in the upper half of the window.
    pub cond_ii_violations: Vec<(usize, usize)>,
    pub verdict: Verdict,
    pub note: &'static str,
}

impl GargantuanReport {
    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "model": self.model,
            "n_max": self.n_max,
            "stride": self.stride,
            "rho": self.rho.as_ref().map(|r| r.to_string()),
            "cond_i_ratios": self.cond_i_ratios.iter().map(|r| match r {
                Some(r) => Value::String(rat_to_decimal(r, digits)),
                None => Value::Null,
            }).collect::<Vec<_>>(),
            "cond_i_flagged": self.cond_i_flagged,
            "cond_ii_violations": self.cond_ii_violations.iter().map(|(n, k)| json!([n, k])).collect::<Vec<_>>(),
            "verdict": self.verdict.as_str(),
            "note": self.note,
        })
    }
}

/// Checks the sufficient conditions `n a_{n-1} = O(a_n)` (heuristically)
/// and "`|a_k a_{n-k}|` decreasing for `k < n/2`" (exactly) on a finite
/// window of raw sizes `0..=n_max`.
///
/// Symbolic models are probed at `rho` (default 1).
pub fn gargantuan_probe(
    model: &ModelSpec,
    n_max: usize,
    rho: Option<&BigRat>,
) -> Result<GargantuanReport> {
    let default_rho = BigRat::one();
    let numeric = match model.rho() {
        Some(Rho::Symbolic) => model.with_rho(rho.unwrap_or(&default_rho).clone())?,
        Some(Rho::Value(_)) => match rho {
            Some(r) => model.with_rho(r.clone())?,
            None => model.clone(),
        },
        None => model.clone(),
    };
    let rho_used = match numeric.rho() {
        Some(Rho::Value(r)) => Some(r.clone()),
        _ => None,
    };
    let p = numeric.stride();
    let k_max = n_max / p;
    let series = numeric.series::<BigRat>(k_max)?;
    let u: Vec<BigRat> = series.coeffs().iter().map(|c| c.abs()).collect();

    let ratios: Vec<Option<BigRat>> = (1..=k_max)
        .map(|k| {
            if u[k].is_zero() {
                None
            } else {
                Some(BigRat::from_integer(k.into()) * &u[k - 1] / &u[k])
            }
        })
        .collect();

    let quarter_start = k_max - k_max / 4;
    let tail: Vec<&Option<BigRat>> = ratios
        .iter()
        .enumerate()
        .filter(|(i, _)| i + 1 >= quarter_start.max(1))
        .map(|(_, r)| r)
        .collect();
    let tail_has_gap = tail.iter().any(|r| r.is_none());
    let cond_i_flagged = tail.windows(2).any(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b > a,
        _ => false,
    });

    let start = if u[0].is_zero() { 1 } else { 0 };
    let mut violations = Vec::new();
    for n in (k_max / 2).max(2)..=k_max {
        let x = |k: usize| &u[k] * &u[n - k];
        let mut k = start;
        while 2 * (k + 1) <= n {
            if x(k + 1) > x(k) {
                violations.push((n, k));
            }
            k += 1;
        }
    }

    let verdict = if cond_i_flagged || !violations.is_empty() {
        Verdict::Fail
    } else if k_max < 8 || tail_has_gap {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };

    Ok(GargantuanReport {
        model: model.id().to_string(),
        n_max,
        stride: p,
        rho: rho_used,
        cond_i_ratios: ratios,
        cond_i_flagged,
        cond_ii_violations: violations,
        verdict,
        note: "finite-window only: condition (i) is a heuristic monotonicity proxy over the last quarter of the window; condition (ii) is exact for sizes in the upper half",
    })
}
