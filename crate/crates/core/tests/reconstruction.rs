mod common;

use cohft_core::arith::{bernoulli_numbers, Matrix, Rational, TruncSeries, Var};
use cohft_core::cohft::{hodge_rmatrix, FrobeniusData, RMatrix};
use cohft_core::graphs::stable_graphs;
use cohft_core::reconstruction::{cohft_axiom_suite, symmetry_checks, Engine, Insertion, Theory};
use cohft_core::rspin::rspin_theory;
use cohft_core::verlinde::verlinde_theory;
use proptest::prelude::*;

fn one(psi: u32) -> Insertion {
    Insertion::new(vec![Rational::one()], psi)
}

fn trivial_with(r: RMatrix) -> Engine {
    Engine::new(Theory { frobenius: FrobeniusData::trivial(), rmatrix: r }).unwrap()
}

/// `R(z) = exp(a_1 z + a_3 z^3 + a_5 z^5)`, symplectic for `η = (1)`.
fn odd_exponential(a: [Rational; 3], order: usize) -> RMatrix {
    let mut exponent = vec![Rational::zero(); order + 1];
    for (k, c) in a.into_iter().enumerate() {
        if 2 * k + 1 <= order {
            exponent[2 * k + 1] = c;
        }
    }
    let series = TruncSeries::truncated(Var::Z, order, exponent).exp().unwrap();
    RMatrix::new((0..=order).map(|k| Matrix::from_fn(1, 1, |_, _| series.coeff(k))).collect()).unwrap()
}

fn assert_all_pass(checks: Vec<cohft_core::reconstruction::AxiomCheck>) {
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c.passed, "{} {}", c.name, c.detail);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Hand expansion on the four graphs of `G_{0,4}`: the smooth graph gives
    /// `4 R_1 ⟨τ_1 τ_0^3⟩ + T_2 ⟨τ_0^4 τ_2⟩ = 3 a_1`, each boundary graph
    /// `Δ_{00} = -a_1`. On `M̄_{1,1}`: `a_1/24 - a_1/24 - a_1/2`.
    #[test]
    fn one_dimensional_hand_expansion(n1 in -20i64..20, d1 in 1i64..9, n3 in -20i64..20, d3 in 1i64..9) {
        let a1 = Rational::frac(n1, d1);
        let engine = trivial_with(odd_exponential([a1.clone(), Rational::frac(n3, d3), Rational::zero()], 3));
        prop_assert_eq!(engine.correlator(0, &[one(0), one(0), one(0)]).unwrap(), Rational::one());
        let graphs = stable_graphs(0, 4).unwrap();
        let ins = [one(0), one(0), one(0), one(0)];
        let parts = engine.graph_contributions(0, &ins, &graphs).unwrap();
        for (c, v) in graphs.iter().zip(&parts) {
            let want = if c.graph.num_edges() == 0 { a1.clone() * Rational::from(3) } else { -a1.clone() };
            prop_assert_eq!(v, &want);
        }
        prop_assert!(engine.correlator(0, &ins).unwrap().is_zero());
        prop_assert_eq!(engine.correlator(1, &[one(0)]).unwrap(), -a1 / Rational::from(2));
    }

    #[test]
    fn over_truncation_is_harmless(g in 0u32..=2, psis in prop::collection::vec(0u32..4, 1..=3), extra in 1usize..4) {
        let n = psis.len();
        prop_assume!(2 * g as i64 - 2 + n as i64 > 0);
        let need = 3 * g as usize + n - 3;
        let (small, big) = (rspin_theory(3, need).unwrap(), rspin_theory(3, need + extra).unwrap());
        let (small, big) = (Engine::new(small).unwrap(), Engine::new(big).unwrap());
        let ins: Vec<Insertion> = psis.iter().enumerate().map(|(i, &b)| Insertion::new(small.frobenius().basis(i % 2), b)).collect();
        prop_assert_eq!(small.correlator(g, &ins).unwrap(), big.correlator(g, &ins).unwrap());
    }
}

#[test]
fn lambda_g_formula() {
    // ∫_{M̄_{g,1}} ψ^{2g-2} λ_g = (2^{2g-1} - 1)|B_{2g}| / (2^{2g-1} (2g)!)
    let b = bernoulli_numbers(6);
    for g in 1..=2u32 {
        let p = Rational::from(2).pow(2 * g - 1);
        let want = (p.clone() - Rational::one()) * b[2 * g as usize].abs() / (p * Rational::factorial(2 * g));
        let engine = trivial_with(hodge_rmatrix(3 * g as usize - 2));
        assert_eq!(engine.correlator(g, &[one(2 * g - 2)]).unwrap(), want, "g={g}");
    }
}

#[test]
fn hodge_class_has_degree_at_most_g() {
    // the degree-3 part of c(E) on M̄_2
    let engine = trivial_with(hodge_rmatrix(3));
    assert!(engine.correlator(2, &[]).unwrap().is_zero());
}

#[test]
fn identity_r_reproduces_psi_integrals() {
    let engine = trivial_with(RMatrix::identity(1, 6));
    for g in 0..=2u32 {
        for n in 1..=3usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for psis in common::exponent_tuples(n, 3 * g as usize + n - 3) {
                let ins: Vec<Insertion> = psis.iter().map(|&b| one(b)).collect();
                assert_eq!(
                    engine.correlator(g, &ins).unwrap(),
                    cohft_core::correlators::psi_correlator(g, &psis).unwrap(),
                    "g={g} {psis:?}"
                );
            }
        }
    }
}

#[test]
fn string_and_dilaton_up_to_five_markings() {
    assert_all_pass(cohft_axiom_suite(&trivial_with(RMatrix::identity(1, 8)), 2, 5).unwrap());
    assert_all_pass(cohft_axiom_suite(&trivial_with(hodge_rmatrix(8)), 2, 5).unwrap());
    let rspin = Engine::new(rspin_theory(3, 7).unwrap()).unwrap();
    assert_all_pass(cohft_axiom_suite(&rspin, 1, 5).unwrap());
}

#[test]
fn markings_can_be_permuted() {
    let rspin = Engine::new(rspin_theory(4, 4).unwrap()).unwrap();
    assert_all_pass(symmetry_checks(&rspin, 1, 4).unwrap());
    let verlinde = Engine::new(verlinde_theory(2, 4, 4).unwrap()).unwrap();
    assert_all_pass(symmetry_checks(&verlinde, 1, 3).unwrap());
}

#[test]
fn graph_order_and_pool_size_do_not_matter() {
    let engine = Engine::new(rspin_theory(4, 4).unwrap()).unwrap();
    let f = engine.frobenius().clone();
    let ins = vec![
        Insertion::new(f.basis(1), 1),
        Insertion::new(f.basis(2), 0),
        Insertion::new(f.basis(0), 1),
        Insertion::new(f.basis(1), 0),
    ];
    let forward = engine.correlator(1, &ins).unwrap();
    let mut graphs = stable_graphs(1, 4).unwrap().as_ref().clone();
    graphs.reverse();
    assert_eq!(engine.correlator_over(1, &ins, &graphs).unwrap(), forward);
    for threads in [1, 2, 5] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let fresh = Engine::new(rspin_theory(4, 4).unwrap()).unwrap();
        assert_eq!(pool.install(|| fresh.correlator(1, &ins)).unwrap(), forward);
    }
}

#[test]
fn linear_in_each_insertion() {
    let engine = Engine::new(rspin_theory(3, 4).unwrap()).unwrap();
    let mix = vec![Rational::frac(2, 3), Rational::from(-5)];
    let f = engine.frobenius();
    let value = |v: Vec<Rational>| {
        engine.correlator(1, &[Insertion::new(v, 1), Insertion::new(f.basis(1), 0), Insertion::new(f.basis(1), 1)]).unwrap()
    };
    let combined = value(mix.clone());
    let split = value(f.basis(0)) * mix[0].clone() + value(f.basis(1)) * mix[1].clone();
    assert_eq!(combined, split);
}

#[test]
fn request_errors() {
    let engine = trivial_with(hodge_rmatrix(2));
    assert!(engine.correlator(0, &[one(0), one(0)]).is_err());
    assert!(engine.correlator(2, &[one(0)]).is_err());
    assert!(engine.correlator(0, &[Insertion::new(vec![], 0), one(0), one(0)]).is_err());
    let bad = Theory { frobenius: FrobeniusData::trivial(), rmatrix: RMatrix::identity(2, 2) };
    assert!(Engine::new(bad).is_err());
}
