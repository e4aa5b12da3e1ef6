//! Enumeration against the series engine and the evaluator.

use num_bigint::BigInt;
use num_traits::One;

use connexp::algebra::{parse_rat, BigRat};
use connexp::expansion::{exact_probability, Evaluator};
use connexp::models::{ModelSpec, Rho};
use connexp::oracle::{count_at_one, er_mass, parity_difference_from_series, Oracle};
use connexp::species::d_coefficients;
use connexp::PolyQ;

fn q(s: &str) -> BigRat {
    parse_rat(s).unwrap()
}

#[test]
fn p_and_q_polynomials_match_engine() {
    let o = Oracle::default();
    let er = ModelSpec::er(Rho::Symbolic);
    let ties = ModelSpec::tournaments_ties(Rho::Symbolic);
    for m in 1..=5 {
        let p = d_coefficients::<PolyQ>(&er, m, 5).unwrap().d;
        let t = d_coefficients::<PolyQ>(&ties, m, 5).unwrap().d;
        for k in 0..=5 {
            assert_eq!(o.p_polynomial(k, m).unwrap(), p[k], "P k={k} m={m}");
            assert_eq!(o.q_polynomial(k, m).unwrap(), t[k], "Q k={k} m={m}");
        }
    }
}

#[test]
fn histogram_mass_and_irreducible_counts() {
    let o = Oracle::with_threads(3);
    for k in 1..=6 {
        assert_eq!(o.enumerate_graph_components(k).unwrap().mass(), er_mass(k));
    }
    for k in 1..=5 {
        let h = o.enumerate_tournament_components(k).unwrap();
        assert_eq!(h.mass(), er_mass(k), "tie totals equal graph totals at k={k}");
        assert!(h.buckets.keys().all(|&c| (1..=k).contains(&c)));
    }
    let it: Vec<BigInt> = (1..=4)
        .map(|k| count_at_one(&o.enumerate_tournament_components(k).unwrap().bucket(1)))
        .collect();
    assert_eq!(it, [1, 0, 2, 24].map(BigInt::from));
}

#[test]
fn single_and_multi_threaded_histograms_agree() {
    let one = Oracle::with_threads(1);
    let many = Oracle::with_threads(7);
    for k in 1..=5 {
        assert_eq!(
            one.enumerate_graph_components(k).unwrap().to_json().to_string(),
            many.enumerate_graph_components(k).unwrap().to_json().to_string()
        );
        assert_eq!(
            one.enumerate_tournament_components(k).unwrap(),
            many.enumerate_tournament_components(k).unwrap()
        );
    }
}

#[test]
fn exact_probabilities_match_enumeration() {
    let o = Oracle::default();
    for rho in ["1/3", "1", "3"] {
        let r = q(rho);
        let er = ModelSpec::er(Rho::value(r.clone()).unwrap());
        let ties = ModelSpec::tournaments_ties(Rho::value(r.clone()).unwrap());
        let ev_g = Evaluator::new(&er, None, 6).unwrap();
        let ev_t = Evaluator::new(&ties, None, 5).unwrap();
        for n in 1..=6 {
            let h = o.enumerate_graph_components(n).unwrap();
            let total = er_mass(n).eval(&r);
            for m in 1..=n {
                assert_eq!(ev_g.exact_probability(m, n).unwrap(), h.bucket(m).eval(&r) / &total);
            }
        }
        for n in 1..=5 {
            let h = o.enumerate_tournament_components(n).unwrap();
            let total = er_mass(n).eval(&r);
            for m in 1..=n {
                assert_eq!(ev_t.exact_probability(m, n).unwrap(), h.bucket(m).eval(&r) / &total);
            }
        }
    }
    assert_eq!(exact_probability(&ModelSpec::simple_graphs(), 1, 4, None).unwrap(), q("19/32"));
}

#[test]
fn parity_difference_is_minus_connectivity_coefficient() {
    let o = Oracle::default();
    let d = d_coefficients::<PolyQ>(&ModelSpec::er(Rho::Symbolic), 1, 6).unwrap().d;
    for k in 1..=6 {
        assert_eq!(o.parity_difference(k).unwrap(), -d[k].clone(), "k={k}");
    }
    let graphs = ModelSpec::simple_graphs();
    for k in 1..=6 {
        let from_series = parity_difference_from_series(&graphs, k).unwrap();
        assert_eq!(from_series, o.parity_difference(k).unwrap().eval(&BigRat::one()));
    }
    let tri = ModelSpec::triangulations();
    let td = d_coefficients::<BigRat>(&tri, 1, 2).unwrap().d;
    assert_eq!(parity_difference_from_series(&tri, 2).unwrap(), -td[1].clone());
    assert_eq!(parity_difference_from_series(&tri, 4).unwrap(), q("9045"));
}

#[test]
fn column_sums_of_enumerated_polynomials() {
    let o = Oracle::default();
    for k in 0..=4 {
        let p = (1..=6).fold(PolyQ::from_ints(&[]), |acc, m| acc + o.p_polynomial(k, m).unwrap());
        let t = (1..=6).fold(PolyQ::from_ints(&[]), |acc, m| acc + o.q_polynomial(k, m).unwrap());
        let want = if k == 0 { PolyQ::from_ints(&[1]) } else { PolyQ::from_ints(&[]) };
        assert_eq!(p, want, "P column {k}");
        assert_eq!(t, want, "Q column {k}");
    }
}
