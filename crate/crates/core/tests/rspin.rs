mod common;

use cohft_core::arith::Rational;
use cohft_core::reconstruction::Engine;
use cohft_core::rspin::{
    bseries, pixton_genus0, polynomiality_scan, rspin_frobenius, rspin_theory, rspin_topological_exact,
    rspin_topological_float, witten_degree, witten_integral, witten_integral_with,
};
use proptest::prelude::*;

#[test]
fn genus_one_one_point() {
    // ∫_{M̄_{1,1}} W^r_{1,1}(0) ψ = (r-1)/24
    for r in 2..=6u32 {
        assert_eq!(witten_integral(r, 1, &[0], &[1]).unwrap(), Rational::frac(r as i64 - 1, 24), "r={r}");
    }
}

#[test]
fn four_point_minimum_rule() {
    // genus 0, Σ a = 2r - 2: (1/r) min_i min(a_i, r - 1 - a_i)
    for r in 3..=7u32 {
        for a in common::multisets(r - 1, 4) {
            if a.iter().sum::<u32>() != 2 * r - 2 {
                continue;
            }
            let m = a.iter().map(|&x| x.min(r - 1 - x)).min().unwrap();
            assert_eq!(witten_integral(r, 0, &a, &[0; 4]).unwrap(), Rational::frac(m as i64, r as i64), "r={r} a={a:?}");
        }
    }
}

#[test]
fn topological_values() {
    assert_eq!(rspin_topological_exact(5, 1, &[0]).unwrap(), Rational::from(4));
    assert_eq!(rspin_topological_exact(3, 0, &[1, 1, 1]).unwrap(), Rational::one());
    assert!((rspin_topological_float(5, 1, &[0]) - 4.0).abs() < 1e-12);
    let f = rspin_frobenius(4).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            let expect = Rational::from((a + b == 2) as i64);
            assert_eq!(f.eta().get(a, b), &expect);
        }
    }
}

#[test]
fn b_series_product_formula() {
    let (even, odd) = bseries(3, 0, 4).unwrap();
    // m = 1: (3 - 2)(3 + 2) (-1/144) = -5/144
    assert_eq!(odd.coeff(1), Rational::frac(-5, 144));
    assert_eq!(even.coeff(0), Rational::one());
    assert_eq!(even.coeff(2), Rational::frac(-5, 144) * Rational::frac(7 * 11, 2) * Rational::frac(-1, 144));
    assert!(bseries(3, 2, 2).is_err());
}

#[test]
fn pixton_on_shuffled_weights() {
    let engine = Engine::new(rspin_theory(6, 2).unwrap()).unwrap();
    let a = [4, 3, 4, 1, 4];
    assert_eq!(witten_degree(6, 0, &a), Some(2));
    let value = witten_integral_with(&engine, 0, &a, &[0; 5]).unwrap();
    assert_eq!(value, pixton_genus0(6, &a));
    assert_eq!(value, witten_integral_with(&engine, 0, &[1, 3, 4, 4, 4], &[0; 5]).unwrap());
}

#[test]
fn polynomiality_scan_reports_each_r() {
    let scan = polynomiality_scan(0, &[0, 0, 0], &[0, 0, 0], true, 3..=6).unwrap();
    let rs: Vec<u32> = scan.iter().map(|(r, _)| *r).collect();
    assert_eq!(rs, vec![3, 4, 5, 6]);
    for (r, v) in scan {
        // weights (r-2, r-2, r-2) never satisfy the genus-0 selection rule for r > 2
        assert_eq!(v, Rational::zero(), "r={r}");
    }
    let scan = polynomiality_scan(1, &[0], &[1], false, 2..=7).unwrap();
    for (r, v) in scan {
        assert_eq!(v, Rational::frac(r as i64 - 1, 24), "r={r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fractional_degree_vanishes(r in 3u32..=6, g in 0u32..=1, raw in prop::collection::vec(0u32..6, 1..=4)) {
        let a: Vec<u32> = raw.iter().map(|&x| x % (r - 1)).collect();
        prop_assume!(2 * g as i64 - 2 + a.len() as i64 > 0);
        prop_assume!(witten_degree(r, g, &a).is_none());
        let psi = vec![0; a.len()];
        prop_assert_eq!(witten_integral(r, g, &a, &psi).unwrap(), Rational::zero());
    }

    #[test]
    fn exact_and_float_topological_parts_agree(r in 2u32..=8, g in 0u32..=3, raw in prop::collection::vec(0u32..8, 0..=5)) {
        let a: Vec<u32> = raw.iter().map(|&x| x % (r - 1)).collect();
        prop_assume!(2 * g as i64 - 2 + a.len() as i64 > 0);
        let exact = rspin_topological_exact(r, g, &a).unwrap().to_f64();
        let float = rspin_topological_float(r, g, &a);
        prop_assert!((exact - float).abs() <= 1e-9 * exact.abs().max(1.0));
    }
}

#[test]
fn out_of_range_weights_error() {
    assert!(witten_integral(3, 0, &[2, 0, 0], &[0, 0, 0]).is_err());
    assert!(witten_integral(1, 0, &[0, 0, 0], &[0, 0, 0]).is_err());
    assert!(witten_integral(3, 0, &[0, 0], &[0, 0]).is_err());
}
