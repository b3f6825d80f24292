mod common;

use cohft_core::arith::Rational;
use cohft_core::correlators::{forgetful_pushforward, integrate_kappa_poly, kappa_psi_correlator, psi_correlator};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

fn dim(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

/// Genus-1 closed form: `(1/24) multinomial(n; d) (1 - Σ_{i>=2} (i-2)!(n-i)!/n! e_i(d))`.
fn genus_one(d: &[u32]) -> Rational {
    let n = d.len();
    let mut multinomial = Rational::factorial(n as u32);
    for &x in d {
        multinomial = multinomial / Rational::factorial(x);
    }
    // elementary symmetric polynomials of d
    let mut e = vec![Rational::zero(); n + 1];
    e[0] = Rational::one();
    for &x in d {
        for i in (1..=n).rev() {
            let t = e[i - 1].clone() * Rational::from(x);
            e[i] = e[i].clone() + t;
        }
    }
    let mut corr = Rational::zero();
    for i in 2..=n {
        corr = corr + Rational::factorial(i as u32 - 2) * Rational::factorial((n - i) as u32) / Rational::factorial(n as u32)
            * e[i].clone();
    }
    multinomial * (Rational::one() - corr) / Rational::from(24)
}

#[test]
fn top_psi_power() {
    for g in 1..=4u32 {
        let want = Rational::one() / (Rational::from(24).pow(g) * Rational::factorial(g));
        assert_eq!(psi_correlator(g, &[3 * g - 2]).unwrap(), want, "g={g}");
    }
}

#[test]
fn tabulated_values() {
    assert_eq!(psi_correlator(0, &[0, 0, 0]).unwrap(), Rational::one());
    assert_eq!(psi_correlator(0, &[1, 1, 0, 0, 0]).unwrap(), q(2, 1));
    assert_eq!(psi_correlator(1, &[1]).unwrap(), q(1, 24));
    assert_eq!(psi_correlator(2, &[4]).unwrap(), q(1, 1152));
    assert_eq!(psi_correlator(2, &[2, 3]).unwrap(), q(29, 5760));
    assert_eq!(psi_correlator(2, &[2, 2, 2]).unwrap(), q(7, 240));
    assert_eq!(psi_correlator(3, &[7]).unwrap(), q(1, 82944));
}

#[test]
fn genus_one_closed_form() {
    for n in 1..=6usize {
        for d in common::exponent_tuples(n, n) {
            if d.iter().sum::<u32>() as usize != n {
                continue;
            }
            assert_eq!(psi_correlator(1, &d).unwrap(), genus_one(&d), "d={d:?}");
        }
    }
}

#[test]
fn unstable_requests_error() {
    assert!(psi_correlator(0, &[0, 0]).is_err());
    assert!(psi_correlator(1, &[]).is_err());
    assert!(kappa_psi_correlator(0, &[], &[1]).is_err());
}

/// `⟨τ_a Π τ_{k_j}⟩_{g,n+m}` against `Σ_σ ⟨τ_a Π_{cycles c} κ_{Σ_{j∈c}(k_j-1)}⟩_{g,n}`,
/// summing over permutations instead of set partitions.
fn permutation_pushforward(g: u32, psi: &[u32], ks: &[u32]) -> Rational {
    let m = ks.len();
    let mut total = Rational::zero();
    for perm in permutations(m) {
        let mut seen = vec![false; m];
        let mut kappa = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut j = start;
            let mut idx = 0;
            while !seen[j] {
                seen[j] = true;
                idx += ks[j] - 1;
                j = perm[j];
            }
            kappa.push(idx);
        }
        total = total + kappa_psi_correlator(g, psi, &kappa).unwrap();
    }
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn pushforward_small_cases() {
    let one = |k: Vec<u32>, c: i64| (k, Rational::from(c));
    let p = forgetful_pushforward(&[3, 2]).unwrap();
    assert_eq!(p, [one(vec![1, 2], 1), one(vec![3], 1)].into_iter().collect());
    let p = forgetful_pushforward(&[2, 2, 2]).unwrap();
    assert_eq!(p, [one(vec![1, 1, 1], 1), one(vec![1, 2], 3), one(vec![3], 2)].into_iter().collect());
    assert!(forgetful_pushforward(&[0]).is_err());
}

#[test]
fn kappa_values() {
    assert_eq!(kappa_psi_correlator(1, &[0], &[1]).unwrap(), q(1, 24));
    assert_eq!(kappa_psi_correlator(0, &[0, 0, 0, 0], &[1]).unwrap(), Rational::one());
    assert_eq!(kappa_psi_correlator(1, &[1], &[0]).unwrap(), q(1, 24));
}

#[test]
fn pushforward_routes_agree() {
    for g in 0..=2u32 {
        for n in 0..=5usize {
            for m in 1..=(6 - n) {
                if 2 * g as i64 - 2 + n as i64 <= 0 {
                    continue;
                }
                let total = dim(g, n + m);
                for all in common::exponent_tuples(n + m, total as usize) {
                    if all.iter().sum::<u32>() as i64 != total {
                        continue;
                    }
                    let (psi, ks) = all.split_at(n);
                    if ks.iter().any(|&k| k == 0) || ks.windows(2).any(|w| w[0] > w[1]) {
                        continue;
                    }
                    let direct = psi_correlator(g, &all).unwrap();
                    let poly = forgetful_pushforward(ks).unwrap();
                    let via_kappa = integrate_kappa_poly(g, psi, &poly).unwrap();
                    assert_eq!(direct, via_kappa, "g={g} psi={psi:?} ks={ks:?}");
                    if m <= 4 {
                        assert_eq!(direct, permutation_pushforward(g, psi, ks), "g={g} psi={psi:?} ks={ks:?}");
                    }
                }
            }
        }
    }
}

fn request() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..=3, 1usize..=6).prop_flat_map(|(g, n)| {
        let n = if 2 * g as i64 - 2 + n as i64 <= 0 { n + 2 } else { n };
        (Just(g), prop::collection::vec(0u32..=(3 * g + n as u32), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn string_equation((g, a) in request()) {
        let mut with = a.clone();
        with.push(0);
        let mut rhs = Rational::zero();
        for j in 0..a.len() {
            if a[j] > 0 {
                let mut b = a.clone();
                b[j] -= 1;
                rhs = rhs + psi_correlator(g, &b).unwrap();
            }
        }
        prop_assert_eq!(psi_correlator(g, &with).unwrap(), rhs);
    }

    #[test]
    fn dilaton_equation((g, a) in request()) {
        let mut with = a.clone();
        with.push(1);
        let rhs = psi_correlator(g, &a).unwrap() * Rational::from(2 * g as i64 - 2 + a.len() as i64);
        prop_assert_eq!(psi_correlator(g, &with).unwrap(), rhs);
    }

    #[test]
    fn symmetric_in_exponents((g, a) in request(), seed in any::<u64>()) {
        let mut b = a.clone();
        let len = b.len();
        b.rotate_left((seed as usize) % len);
        b.swap(0, (seed as usize / 7) % len);
        prop_assert_eq!(psi_correlator(g, &a).unwrap(), psi_correlator(g, &b).unwrap());
    }

    #[test]
    fn wrong_degree_vanishes((g, a) in request()) {
        prop_assume!(a.iter().map(|&x| x as i64).sum::<i64>() != dim(g, a.len()));
        prop_assert!(psi_correlator(g, &a).unwrap().is_zero());
    }
}
