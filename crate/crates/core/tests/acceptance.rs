//! Acceptance criteria, one line per criterion. Runs as a plain binary so
//! the lines show up under `cargo test`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use connexp::algebra::{parse_rat, rat_to_decimal};
use connexp::expansion::Evaluator;
use connexp::models::{ModelSpec, Rho};
use connexp::oracle::{er_mass, Oracle};
use connexp::species::{d_coefficients, equipotence_check};
use connexp::{BigRat, Egf, PolyQ};

const GRAPH_TABLE: [[&str; 5]; 5] = [
    ["1", "-1", "1-rho", "-1+3rho-3rho^2-rho^3", "1-6rho+15rho^2-12rho^3-15rho^4-6rho^5-rho^6"],
    ["0", "1", "rho-2", "3-6rho+3rho^2+rho^3", "-4+18rho-30rho^2+8rho^3+15rho^4+6rho^5+rho^6"],
    ["0", "0", "1", "3rho-3", "6-18rho+15rho^2+4rho^3"],
    ["0", "0", "0", "1", "6rho-4"],
    ["0", "0", "0", "0", "1"],
];

const TIES_TABLE: [[&str; 5]; 5] = [
    ["1", "-2", "4-2rho", "-8+12rho-6rho^2-2rho^3", "16-48rho+60rho^2-16rho^3-30rho^4-12rho^5-2rho^6"],
    ["0", "2", "2rho-10", "38-30rho+6rho^2+2rho^3", "-130+228rho-150rho^2-8rho^3+30rho^4+12rho^5+2rho^6"],
    ["0", "0", "6", "18rho-54", "330-324rho+90rho^2+24rho^3"],
    ["0", "0", "0", "24", "144rho-336"],
    ["0", "0", "0", "0", "120"],
];

type Outcome = Result<(), String>;

fn poly(s: &str) -> PolyQ {
    s.parse().unwrap()
}

fn q(s: &str) -> BigRat {
    parse_rat(s).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_matches(model: ModelSpec, table: &[[&str; 5]; 5]) -> Outcome {
    for m in 1..=5 {
        let d = d_coefficients::<PolyQ>(&model, m, 4).map_err(|e| e.to_string())?.d;
        for k in 0..=4 {
            let want = poly(table[m - 1][k]);
            ensure(d[k] == want, || format!("k={k} m={m}: got {}, want {want}", d[k]))?;
        }
    }
    Ok(())
}

fn table2() -> Outcome {
    table_matches(ModelSpec::er(Rho::Symbolic), &GRAPH_TABLE)
}

fn table3() -> Outcome {
    table_matches(ModelSpec::tournaments_ties(Rho::Symbolic), &TIES_TABLE)
}

fn intro_graphs() -> Outcome {
    let d = d_coefficients::<BigRat>(&ModelSpec::simple_graphs(), 1, 4).map_err(|e| e.to_string())?.d;
    let got: Vec<BigRat> = d[1..].iter().map(|x| -x).collect();
    let want: Vec<BigRat> = ["1", "0", "2", "24"].iter().map(|s| q(s)).collect();
    ensure(got == want, || format!("got {got:?}"))
}

fn intro_triangulations() -> Outcome {
    let t = d_coefficients::<BigRat>(&ModelSpec::triangulations(), 1, 4).map_err(|e| e.to_string())?;
    ensure(t.stride == 2, || "stride is not 2".into())?;
    let got: Vec<BigRat> = t.d[1..].iter().map(|x| -x).collect();
    let want: Vec<BigRat> = ["15", "9045", "30085425", "282543711975"].iter().map(|s| q(s)).collect();
    ensure(got == want, || format!("got {got:?}"))
}

fn intro_quarter() -> Outcome {
    let er = ModelSpec::er(Rho::from_probability(&q("1/4")).map_err(|e| e.to_string())?);
    let d = d_coefficients::<BigRat>(&er, 1, 4).map_err(|e| e.to_string())?.d;
    let want: Vec<BigRat> = ["-1", "2/3", "-10/27", "8/729"].iter().map(|s| q(s)).collect();
    ensure(d[1..] == want[..], || format!("got {:?}", &d[1..]))
}

fn oracle_equivalence() -> Outcome {
    let o = Oracle::with_threads(4);
    let er = ModelSpec::er(Rho::Symbolic);
    let ties = ModelSpec::tournaments_ties(Rho::Symbolic);
    for m in 1..=5 {
        let p = d_coefficients::<PolyQ>(&er, m, 4).map_err(|e| e.to_string())?.d;
        let qd = d_coefficients::<PolyQ>(&ties, m, 4).map_err(|e| e.to_string())?.d;
        for k in 0..=4 {
            let pe = o.p_polynomial(k, m).map_err(|e| e.to_string())?;
            ensure(pe == p[k], || format!("P k={k} m={m}: enumeration {pe}, engine {}", p[k]))?;
            let qe = o.q_polynomial(k, m).map_err(|e| e.to_string())?;
            ensure(qe == qd[k], || format!("Q k={k} m={m}: enumeration {qe}, engine {}", qd[k]))?;
        }
    }
    for k in 1..=6 {
        let mass = o.enumerate_graph_components(k).map_err(|e| e.to_string())?.mass();
        ensure(mass == er_mass(k), || format!("mass at k={k} is {mass}"))?;
    }
    Ok(())
}

fn small_rat() -> impl Strategy<Value = BigRat> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| BigRat::new(a.into(), b.into()))
}

fn series(order: usize) -> impl Strategy<Value = Egf<BigRat>> {
    vec(small_rat(), order + 1).prop_map(Egf::new)
}

fn with_head(s: &Egf<BigRat>, head: &[BigRat]) -> Egf<BigRat> {
    let mut c = s.coeffs().to_vec();
    c[..head.len()].clone_from_slice(head);
    Egf::new(c)
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn identities() -> Outcome {
    ensure(equipotence_check(30), || "equipotence fails at order 30".into())?;
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 16,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let (zero, one) = (BigRat::zero(), BigRat::one());
    let strategy = (series(20), series(20));
    runner
        .run(&strategy, |(f, g)| {
            let unit = with_head(&f, std::slice::from_ref(&one));
            let inv = unit.mult_inverse().unwrap();
            check(unit.mul(&inv).unwrap() == Egf::one(20), "f * f^-1 = 1")?;

            let tangent = with_head(&f, &[zero.clone(), one.clone()]);
            let rev = tangent.comp_inverse().unwrap();
            check(Egf::compose(&tangent, &rev).unwrap() == Egf::z(20), "f(f^<-1>) = z")?;
            check(Egf::compose(&rev, &tangent).unwrap() == Egf::z(20), "f^<-1>(f) = z")?;

            let nil = with_head(&g, std::slice::from_ref(&zero));
            check(nil.exp().unwrap().log().unwrap() == nil, "log exp g = g")?;
            check(unit.log().unwrap().exp().unwrap() == unit, "exp log f = f")?;

            let lhs = f.mul(&g).unwrap().derivative().unwrap();
            let rhs = f
                .derivative()
                .unwrap()
                .mul(&g.truncate(19))
                .unwrap()
                .add(&f.truncate(19).mul(&g.derivative().unwrap()).unwrap())
                .unwrap();
            check(lhs.order() == 19 && lhs == rhs, "Leibniz rule")
        })
        .map_err(|e| e.to_string())
}

fn catalog_instances() -> Vec<ModelSpec> {
    let mut models = vec![
        ModelSpec::simple_graphs(),
        ModelSpec::multigraphs(1).unwrap(),
        ModelSpec::multigraphs(3).unwrap(),
        ModelSpec::tournaments(),
        ModelSpec::qss(),
        ModelSpec::triangulations(),
        ModelSpec::nonempty_graphs_cyc(),
        ModelSpec::constant_test(),
    ];
    for p in 3..=6 {
        models.push(ModelSpec::p_angulations(p).unwrap());
    }
    for d in 2..=4 {
        models.push(ModelSpec::gem(d).unwrap());
    }
    for rho in ["1/3", "1", "3"] {
        models.push(ModelSpec::er(Rho::value(q(rho)).unwrap()));
        models.push(ModelSpec::tournaments_ties(Rho::value(q(rho)).unwrap()));
    }
    models
}

fn completeness() -> Outcome {
    for model in catalog_instances() {
        let ev = Evaluator::new(&model, None, 8).map_err(|e| e.to_string())?;
        for n in (1..=8).filter(|n| n % model.stride() == 0) {
            let mut total = BigRat::zero();
            for m in 1..=n {
                total += ev.exact_probability(m, n).map_err(|e| e.to_string())?;
            }
            ensure(total.is_one(), || format!("{} {:?} n={n}: sum {total}", model.id(), model.rho()))?;
        }
    }
    Ok(())
}

fn convergence() -> Outcome {
    let graphs = Evaluator::new(&ModelSpec::simple_graphs(), None, 25).map_err(|e| e.to_string())?;
    let report = graphs.convergence_report(1, 10..=25, 3).map_err(|e| e.to_string())?;
    let bound = q("10");
    for row in &report.rows {
        let ok = row.ratio.as_ref().is_some_and(|r| *r <= bound);
        ensure(ok, || format!("graphs n={}: ratio {:?}", row.n, row.ratio))?;
    }
    ensure(report.rows.len() == 16, || "missing rows".into())?;
    let qss = Evaluator::new(&ModelSpec::qss(), None, 40).map_err(|e| e.to_string())?;
    let (lo, hi) = (q("4/5"), q("6/5"));
    let mut outside = Vec::new();
    for n in 10..=40usize {
        let scaled = qss.exact_probability(2, n).map_err(|e| e.to_string())?
            * BigRat::from_integer((4 * n).into());
        if scaled < lo || scaled > hi {
            outside.push(format!("n={n}: {}", rat_to_decimal(&scaled, 6)));
        }
    }
    ensure(outside.is_empty(), || {
        format!("graphs part holds; qss 4n P(2 components) outside [0.8, 1.2] at {}", outside.join(", "))
    })
}

fn column_sums() -> Outcome {
    for (label, model) in [
        ("P", ModelSpec::er(Rho::Symbolic)),
        ("Q", ModelSpec::tournaments_ties(Rho::Symbolic)),
    ] {
        let rows: Vec<Vec<PolyQ>> = (1..=5)
            .map(|m| d_coefficients::<PolyQ>(&model, m, 4).map(|t| t.d))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for k in 0..=4 {
            let sum = rows.iter().fold(PolyQ::zero(), |acc, r| acc + &r[k]);
            let want = if k == 0 { PolyQ::one() } else { PolyQ::zero() };
            ensure(sum == want, || format!("{label} column {k} sums to {sum}"))?;
        }
    }
    Ok(())
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        (1, "graph connectivity table P_{k,m}, k<=4, m<=5", secs(1), table2),
        (2, "tie tournament table Q_{k,m}, k<=4, m<=5", secs(1), table3),
        (3, "graphs: -d_{k,1} = irreducible tournaments 1, 0, 2, 24", secs(1), intro_graphs),
        (4, "triangulations: -d_{2k,1} = 15, 9045, 30085425, 282543711975", secs(1), intro_triangulations),
        (5, "G(n,1/4): coefficients -1, 2/3, -10/27, 8/729", secs(1), intro_quarter),
        (6, "enumeration equals engine; histogram mass k<=6", secs(60), oracle_equivalence),
        (7, "equipotence to order 30; inverse, exp/log, Leibniz round trips", secs(5), identities),
        (8, "probability completeness n<=8, all catalog models", secs(10), completeness),
        (9, "residual ratio <= 10 for graphs; qss 4n P within 20%", secs(30), convergence),
        (10, "column sums of P and Q", secs(1), column_sums),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= budget, || format!("took {elapsed:?}, budget {budget:?}"))
        });
        match outcome {
            Ok(()) => println!("criterion {id:>2} PASS ({:.3}s) {name}", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL ({:.3}s) {name}: {why}", elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
