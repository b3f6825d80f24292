mod common;

use cohft_core::arith::Rational;
use cohft_core::correlators::psi_correlator;
use cohft_core::reconstruction::Engine;
use cohft_core::verlinde::{
    sl2_fusion, verlinde_action_rmatrix, verlinde_correlator, verlinde_correlator_with, verlinde_rank, verlinde_rmatrix,
    verlinde_theory, VerlindeWeightData,
};
use proptest::prelude::*;
use std::f64::consts::PI;

/// Verlinde formula through the modular S-matrix, in floating point.
fn s_matrix_rank(level: u32, g: u32, weights: &[u32]) -> f64 {
    let k = level as f64 + 2.0;
    let s = |a: u32, b: u32| (2.0 / k).sqrt() * (PI * (a + 1) as f64 * (b + 1) as f64 / k).sin();
    let exponent = 2 - 2 * g as i32 - weights.len() as i32;
    (0..=level).map(|j| s(0, j).powi(exponent) * weights.iter().map(|&a| s(a, j)).product::<f64>()).sum()
}

#[test]
fn ranks_match_the_s_matrix() {
    for level in 1..=4u32 {
        for g in 0..=3u32 {
            for n in 0..=4usize {
                if 2 * g as i64 - 2 + n as i64 <= 0 {
                    continue;
                }
                for w in common::multisets(level + 1, n) {
                    let exact = verlinde_rank(level, g, &w).unwrap() as f64;
                    let float = s_matrix_rank(level, g, &w);
                    assert!((exact - float).abs() < 1e-6 * float.abs().max(1.0), "ℓ={level} g={g} {w:?}: {exact} vs {float}");
                }
            }
        }
    }
}

#[test]
fn fusion_is_symmetric() {
    for level in 1..=5u32 {
        for a in 0..=level {
            for b in 0..=level {
                for c in 0..=level {
                    let v = sl2_fusion(level, a, b, c).unwrap();
                    assert_eq!(v, sl2_fusion(level, b, c, a).unwrap());
                    assert_eq!(v, sl2_fusion(level, b, a, c).unwrap());
                }
            }
        }
    }
}

#[test]
fn constant_term_is_rank_times_psi_integral() {
    for level in 1..=2u32 {
        for (g, n) in [(0u32, 4usize), (0, 5), (1, 1), (1, 2), (1, 3)] {
            let dim = 3 * g as usize + n - 3;
            let engine = Engine::new(verlinde_theory(level, dim, 0).unwrap()).unwrap();
            for w in common::multisets(level + 1, n) {
                let rank = Rational::from(verlinde_rank(level, g, &w).unwrap() as i64);
                for psi in common::exponent_tuples(n, dim) {
                    if psi.iter().sum::<u32>() as usize != dim {
                        continue;
                    }
                    let v = verlinde_correlator_with(&engine, g, &w, &psi).unwrap();
                    assert_eq!(v.coeff(0), rank.clone() * psi_correlator(g, &psi).unwrap(), "ℓ={level} g={g} {w:?} {psi:?}");
                }
            }
        }
    }
}

/// First Chern class on `M̄_{0,4}`:
/// `rk Σ_i w(a_i) - Σ_{splits} Σ_μ w(μ) rk(a_i, a_j, μ) rk(μ, a_k, a_l)`.
fn four_point_degree(level: u32, a: &[u32]) -> Rational {
    let data = VerlindeWeightData::new(level).unwrap();
    let rk = |w: &[u32]| Rational::from(verlinde_rank(level, 0, w).unwrap() as i64);
    let mut deg = Rational::zero();
    for &x in a {
        deg = deg + data.weights[x as usize].clone() * rk(a);
    }
    for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        for mu in 0..=level {
            let boundary = rk(&[a[i], a[j], mu]) * rk(&[mu, a[k], a[l]]);
            deg = deg - data.weights[mu as usize].clone() * boundary;
        }
    }
    deg
}

#[test]
fn first_chern_class_on_four_pointed_line() {
    for level in 1..=4u32 {
        let engine = Engine::new(verlinde_theory(level, 1, 1).unwrap()).unwrap();
        for w in common::multisets(level + 1, 4) {
            let v = verlinde_correlator_with(&engine, 0, &w, &[0; 4]).unwrap();
            assert_eq!(v.coeff(1), four_point_degree(level, &w), "ℓ={level} {w:?}");
        }
    }
}

/// `∫_{M̄_{1,1}} ch_1 = rk ((c/2) λ_1 + w(a) ψ) - ½ Σ_μ w(μ) rk_0(a, μ, μ)`,
/// with `∫λ_1 = ∫ψ = 1/24`.
fn genus_one_degree(level: u32, a: u32) -> Rational {
    let data = VerlindeWeightData::new(level).unwrap();
    let rk = Rational::from(verlinde_rank(level, 1, &[a]).unwrap() as i64);
    let slope = data.central_charge.clone() / Rational::from(2) + data.weights[a as usize].clone();
    let mut deg = rk * slope / Rational::from(24);
    for mu in 0..=level {
        let r0 = Rational::from(verlinde_rank(level, 0, &[a, mu, mu]).unwrap() as i64);
        deg = deg - data.weights[mu as usize].clone() * r0 / Rational::from(2);
    }
    deg
}

#[test]
fn first_chern_class_on_one_pointed_elliptic_curves() {
    for level in 1..=4u32 {
        for a in 0..=level {
            let v = verlinde_correlator(level, 1, &[a], &[0], Some(1)).unwrap();
            assert_eq!(v.coeff(1), genus_one_degree(level, a), "ℓ={level} a={a}");
        }
    }
}

#[test]
fn action_matrix_inverts_the_printed_one() {
    for level in 1..=3u32 {
        let (p, a) = (verlinde_rmatrix(level, 5, 5).unwrap(), verlinde_action_rmatrix(level, 5, 5).unwrap());
        for k in 0..=5 {
            let mut sum = p.coeff(0).mul(a.coeff(k)).unwrap();
            for j in 1..=k {
                sum = sum.add(&p.coeff(j).mul(a.coeff(k - j)).unwrap()).unwrap();
            }
            for i in 0..=level as usize {
                for j in 0..=level as usize {
                    let entry = sum.get(i, j);
                    assert_eq!(entry.coeff(0), Rational::from((k == 0 && i == j) as i64), "ℓ={level} z^{k}");
                    assert!((1..=5).all(|m| entry.coeff(m).is_zero()), "ℓ={level} z^{k}");
                }
            }
        }
    }
}

#[test]
fn higher_t_powers_vanish_past_the_dimension() {
    let v = verlinde_correlator(2, 0, &[1, 1, 1, 1, 2], &[0; 5], Some(5)).unwrap();
    for k in 3..=5 {
        assert!(v.coeff(k).is_zero(), "t^{k}");
    }
}

#[test]
fn bad_requests_error() {
    assert!(verlinde_rank(0, 0, &[0, 0, 0]).is_err());
    assert!(verlinde_rank(2, 0, &[3, 0, 0]).is_err());
    assert!(verlinde_correlator(1, 0, &[0, 0], &[0, 0], None).is_err());
    assert!(verlinde_correlator(1, 0, &[0, 0, 0], &[0, 0], None).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn correlators_are_symmetric_in_markings(
        level in 1u32..=3,
        raw in prop::collection::vec((0u32..4, 0u32..2), 4),
        shift in 1usize..4,
    ) {
        let w: Vec<u32> = raw.iter().map(|(a, _)| a % (level + 1)).collect();
        let psi: Vec<u32> = raw.iter().map(|(_, b)| *b).collect();
        let (mut w2, mut psi2) = (w.clone(), psi.clone());
        w2.rotate_left(shift);
        psi2.rotate_left(shift);
        let a = verlinde_correlator(level, 1, &w, &psi, None).unwrap();
        let b = verlinde_correlator(level, 1, &w2, &psi2, None).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ranks_are_symmetric(level in 1u32..=5, g in 0u32..=2, raw in prop::collection::vec(0u32..6, 3..=5), seed in any::<u64>()) {
        let w: Vec<u32> = raw.iter().map(|a| a % (level + 1)).collect();
        let mut v = w.clone();
        let len = v.len();
        v.rotate_left(seed as usize % len);
        v.swap(0, (seed as usize / 5) % len);
        prop_assert_eq!(verlinde_rank(level, g, &w).unwrap(), verlinde_rank(level, g, &v).unwrap());
    }
}
