//! Golden tables and self-checks behind the `verify` command.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{parse_rat, BigRat, PolyQ};
use crate::error::{Error, Result};
use crate::models::{ModelSpec, Rho};
use crate::oracle::{er_mass, Oracle};
use crate::species::{anti_seq_series, d_coefficients, derived_series, equipotence_check, DecompKind};

/// `P_{k,m}(rho)`, graph connectivity coefficients: row `m - 1`, column `k`.
pub const P_TABLE: [[&str; 5]; 5] = [
    [
        "1",
        "-1",
        "-rho+1",
        "-rho^3-3rho^2+3rho-1",
        "-rho^6-6rho^5-15rho^4-12rho^3+15rho^2-6rho+1",
    ],
    [
        "0",
        "1",
        "rho-2",
        "rho^3+3rho^2-6rho+3",
        "rho^6+6rho^5+15rho^4+8rho^3-30rho^2+18rho-4",
    ],
    ["0", "0", "1", "3rho-3", "4rho^3+15rho^2-18rho+6"],
    ["0", "0", "0", "1", "6rho-4"],
    ["0", "0", "0", "0", "1"],
];

/// `Q_{k,m}(rho)` for tournaments with ties: row `m - 1`, column `k`.
pub const Q_TABLE: [[&str; 5]; 5] = [
    [
        "1",
        "-2",
        "-2rho+4",
        "-2rho^3-6rho^2+12rho-8",
        "-2rho^6-12rho^5-30rho^4-16rho^3+60rho^2-48rho+16",
    ],
    [
        "0",
        "2",
        "2rho-10",
        "2rho^3+6rho^2-30rho+38",
        "2rho^6+12rho^5+30rho^4-8rho^3-150rho^2+228rho-130",
    ],
    ["0", "0", "6", "18rho-54", "24rho^3+90rho^2-324rho+330"],
    ["0", "0", "0", "24", "144rho-336"],
    ["0", "0", "0", "0", "120"],
];

/// Irreducible tournaments on `1..=4` vertices.
pub const IRREDUCIBLE_TOURNAMENTS: [i64; 4] = [1, 0, 2, 24];

/// Connected triangulated surfaces glued from `2k` triangles, `k = 1..=4`.
pub const TRIANGULATION_COEFFS: [&str; 4] = ["15", "9045", "30085425", "282543711975"];

/// Connectivity coefficients of `G(n, 1/4)`, i.e. at `rho = 1/3`.
pub const QUARTER_COEFFS: [&str; 5] = ["1", "-1", "2/3", "-10/27", "8/729"];

pub fn golden(table: &[[&str; 5]; 5], k: usize, m: usize) -> PolyQ {
    table[m - 1][k].parse().expect("golden tables are well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Tables,
    Oracle,
    Identities,
    Intro,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "tables" => Ok(Suite::Tables),
            "oracle" => Ok(Suite::Oracle),
            "identities" => Ok(Suite::Identities),
            "intro" => Ok(Suite::Intro),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParameter(format!(
                "unknown suite `{other}` (tables, oracle, identities, intro, all)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

impl CheckItem {
    fn new(suite: &'static str, name: String, pass: bool, detail: Option<String>) -> Self {
        CheckItem {
            suite,
            name,
            pass,
            detail,
        }
    }

    fn compare<T: PartialEq + std::fmt::Display>(
        suite: &'static str,
        name: String,
        expected: &T,
        got: &T,
    ) -> Self {
        let pass = expected == got;
        let detail = (!pass).then(|| format!("expected {expected}, got {got}"));
        Self::new(suite, name, pass, detail)
    }

    fn compare_poly(suite: &'static str, name: String, expected: &PolyQ, got: &PolyQ) -> Self {
        let pass = expected == got;
        let detail =
            (!pass).then(|| format!("expected {expected}, got {got}, difference {}", got - expected));
        Self::new(suite, name, pass, detail)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "name": self.name,
            "pass": self.pass,
            "detail": self.detail,
        })
    }

    pub fn line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        match &self.detail {
            Some(d) => format!("{status} [{}] {}: {d}", self.suite, self.name),
            None => format!("{status} [{}] {}", self.suite, self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub items: Vec<CheckItem>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn passed(&self) -> usize {
        self.items.iter().filter(|i| i.pass).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "total": self.items.len(),
            "passed": self.passed(),
            "all_pass": self.all_pass(),
            "items": self.items.iter().map(CheckItem::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Options for [`run`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Largest `k` for engine-versus-enumeration checks.
    pub k_max: usize,
    /// Series order for identity checks.
    pub order: usize,
    pub oracle: Oracle,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            k_max: 4,
            order: 12,
            oracle: Oracle::default(),
        }
    }
}

/// Engine table `d_{k,m}` for `k <= k_max`, `m <= m_max`, indexed `[m-1][k]`.
pub fn engine_table(model: &ModelSpec, k_max: usize, m_max: usize) -> Result<Vec<Vec<PolyQ>>> {
    (1..=m_max)
        .map(|m| Ok(d_coefficients::<PolyQ>(model, m, k_max)?.d))
        .collect()
}

fn tables() -> Result<Vec<CheckItem>> {
    let mut items = Vec::new();
    for (label, model, table) in [
        ("P", ModelSpec::er(Rho::Symbolic), &P_TABLE),
        ("Q", ModelSpec::tournaments_ties(Rho::Symbolic), &Q_TABLE),
    ] {
        let engine = engine_table(&model, 4, 5)?;
        for m in 1..=5 {
            for k in 0..=4 {
                items.push(CheckItem::compare_poly(
                    "tables",
                    format!("{label}_{{{k},{m}}}"),
                    &golden(table, k, m),
                    &engine[m - 1][k],
                ));
            }
        }
    }
    Ok(items)
}

fn oracle_checks(opts: &VerifyOptions) -> Result<Vec<CheckItem>> {
    let mut items = Vec::new();
    let o = &opts.oracle;
    let k_max = opts.k_max;
    let p_engine = engine_table(&ModelSpec::er(Rho::Symbolic), k_max, 5)?;
    let q_engine = engine_table(&ModelSpec::tournaments_ties(Rho::Symbolic), k_max, 5)?;
    for m in 1..=5 {
        for k in 0..=k_max {
            items.push(CheckItem::compare_poly(
                "oracle",
                format!("P_{{{k},{m}}} enumeration"),
                &o.p_polynomial(k, m)?,
                &p_engine[m - 1][k],
            ));
            items.push(CheckItem::compare_poly(
                "oracle",
                format!("Q_{{{k},{m}}} enumeration"),
                &o.q_polynomial(k, m)?,
                &q_engine[m - 1][k],
            ));
        }
    }
    for k in 1..=o.graph_cap {
        items.push(CheckItem::compare_poly(
            "oracle",
            format!("graph histogram mass k={k}"),
            &er_mass(k),
            &o.enumerate_graph_components(k)?.mass(),
        ));
    }
    items.push(CheckItem::new(
        "oracle",
        format!("SCC buckets equal sequences of irreducibles, k<={}", o.tie_cap),
        o.sequence_buckets_agree(o.tie_cap)?,
        None,
    ));
    Ok(items)
}

fn identities(opts: &VerifyOptions) -> Result<Vec<CheckItem>> {
    let mut items = vec![CheckItem::new(
        "identities",
        format!("E^-1(E_+^(-1)) = 1 - L_+^(-1) to order {}", opts.order),
        equipotence_check(opts.order),
        None,
    )];
    let graphs = ModelSpec::simple_graphs().series::<BigRat>(opts.order)?;
    let direct = derived_series(&graphs, DecompKind::Set, 1)?;
    items.push(CheckItem::new(
        "identities",
        format!("anti-SEQ route equals exp(-log A) on graphs, order {}", opts.order),
        anti_seq_series(&graphs)? == direct,
        None,
    ));
    for (label, table) in [("P", &P_TABLE), ("Q", &Q_TABLE)] {
        for k in 0..=4 {
            let sum = (1..=5).fold(PolyQ::zero(), |acc, m| acc + golden(table, k, m));
            let expected = if k == 0 { PolyQ::one() } else { PolyQ::zero() };
            items.push(CheckItem::compare_poly(
                "identities",
                format!("column sum of {label} at k={k}"),
                &expected,
                &sum,
            ));
        }
    }
    Ok(items)
}

fn intro() -> Result<Vec<CheckItem>> {
    let mut items = Vec::new();
    let graphs = d_coefficients::<BigRat>(&ModelSpec::simple_graphs(), 1, 4)?;
    for (k, &it) in (1..=4).zip(IRREDUCIBLE_TOURNAMENTS.iter()) {
        items.push(CheckItem::compare(
            "intro",
            format!("-d_{{{k},1}} for graphs"),
            &BigRat::from_integer(it.into()),
            &-graphs.d[k].clone(),
        ));
    }
    let tri = d_coefficients::<BigRat>(&ModelSpec::triangulations(), 1, 4)?;
    for (k, s) in (1..=4).zip(TRIANGULATION_COEFFS.iter()) {
        let expected = BigRat::from_integer(s.parse::<BigInt>().expect("integer literal"));
        items.push(CheckItem::compare(
            "intro",
            format!("-d_{{{},1}} for triangulations", 2 * k),
            &expected,
            &-tri.d[k].clone(),
        ));
    }
    let er = ModelSpec::er(Rho::Symbolic).with_rho(BigRat::new(1.into(), 3.into()))?;
    let quarter = d_coefficients::<BigRat>(&er, 1, 4)?;
    for (k, s) in QUARTER_COEFFS.iter().enumerate() {
        let expected = parse_rat(s)?;
        items.push(CheckItem::compare(
            "intro",
            format!("G(n,1/4) coefficient k={k}"),
            &expected,
            &quarter.d[k],
        ));
    }
    Ok(items)
}

/// Runs one suite (or all of them).
pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut items = Vec::new();
    if matches!(suite, Suite::Tables | Suite::All) {
        items.extend(tables()?);
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        items.extend(oracle_checks(opts)?);
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        items.extend(identities(opts)?);
    }
    if matches!(suite, Suite::Intro | Suite::All) {
        items.extend(intro()?);
    }
    Ok(VerifyReport { items })
}
