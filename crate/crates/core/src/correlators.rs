//! Intersection numbers of ψ and κ classes on `M̄_{g,n}`.
//!
//! Conventions: `κ_a = p_*(ψ_{n+1}^{a+1})` for the map forgetting one
//! marking, so `κ_0 = 2g-2+n`. Pulling back along that map gives
//! `p^*κ_a = κ_a - ψ_{n+1}^a`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use dashmap::DashMap;

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Polynomial in κ classes: sorted index multiset → coefficient.
pub type KappaPoly = BTreeMap<Vec<u32>, Rational>;

fn check_stable(g: u32, n: usize) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        Err(Error::UnstablePair { g, n })
    } else {
        Ok(())
    }
}

fn dim(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

/// `(2k-1)!!` with `(-1)!! = 1`.
fn odd_double_factorial(k: i64) -> Rational {
    let mut acc = Rational::one();
    let mut j = 2 * k - 1;
    while j > 1 {
        acc *= &Rational::from(j);
        j -= 2;
    }
    acc
}

type PsiKey = (u32, Vec<u32>);

fn psi_cache() -> &'static DashMap<PsiKey, Rational> {
    static CACHE: OnceLock<DashMap<PsiKey, Rational>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// `∫_{M̄_{g,n}} ψ_1^{a_1} ⋯ ψ_n^{a_n}`.
pub fn psi_correlator(g: u32, exponents: &[u32]) -> Result<Rational> {
    check_stable(g, exponents.len())?;
    let mut a = exponents.to_vec();
    a.sort_unstable();
    Ok(psi_sorted(g, a))
}

/// Like [`psi_correlator`] but zero on unstable input.
fn psi_or_zero(g: u32, a: Vec<u32>) -> Rational {
    if 2 * g as i64 - 2 + a.len() as i64 <= 0 {
        return Rational::zero();
    }
    let mut a = a;
    a.sort_unstable();
    psi_sorted(g, a)
}

fn psi_sorted(g: u32, a: Vec<u32>) -> Rational {
    let n = a.len();
    if a.iter().map(|&x| x as i64).sum::<i64>() != dim(g, n) {
        return Rational::zero();
    }
    if g == 0 {
        let mut v = Rational::factorial(n as u32 - 3);
        for &x in &a {
            v = v / Rational::factorial(x);
        }
        return v;
    }
    if g == 1 && n == 1 {
        return Rational::frac(1, 24);
    }
    let key = (g, a);
    if let Some(hit) = psi_cache().get(&key) {
        return hit.clone();
    }
    let value = psi_recurse(g, &key.1);
    psi_cache().insert(key, value.clone());
    value
}

fn psi_recurse(g: u32, a: &[u32]) -> Rational {
    // string equation on a τ_0 insertion
    if a[0] == 0 {
        let rest = &a[1..];
        let mut acc = Rational::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut b = rest.to_vec();
                b[j] -= 1;
                acc += &psi_or_zero(g, b);
            }
        }
        return acc;
    }
    // DVV on the largest exponent
    let k = *a.last().unwrap() as i64;
    let s = &a[..a.len() - 1];
    let mut acc = Rational::zero();
    for (j, &dj) in s.iter().enumerate() {
        let dj = dj as i64;
        let mut b: Vec<u32> = s.to_vec();
        b[j] = (k + dj - 1) as u32;
        let coef = odd_double_factorial(k + dj) / odd_double_factorial(dj);
        acc += &(coef * psi_or_zero(g, b));
    }
    let half = Rational::frac(1, 2);
    for x in 0..=(k - 2).max(-1) {
        let y = k - 2 - x;
        if y < 0 {
            continue;
        }
        let coef = &half * &(odd_double_factorial(x + 1) * odd_double_factorial(y + 1));
        let mut inner = Rational::zero();
        if g > 0 {
            let mut b = s.to_vec();
            b.push(x as u32);
            b.push(y as u32);
            inner += &psi_or_zero(g - 1, b);
        }
        let m = s.len();
        for mask in 0u32..(1 << m) {
            let (mut left, mut right) = (vec![x as u32], vec![y as u32]);
            for (i, &e) in s.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left.push(e);
                } else {
                    right.push(e);
                }
            }
            for g1 in 0..=g {
                let l = psi_or_zero(g1, left.clone());
                if l.is_zero() {
                    continue;
                }
                inner += &(l * psi_or_zero(g - g1, right.clone()));
            }
        }
        acc += &(coef * inner);
    }
    acc / odd_double_factorial(k + 1)
}

/// `p_{m*}(ψ_{n+1}^{k_1} ⋯ ψ_{n+m}^{k_m})` as a κ polynomial:
/// a sum over set partitions, a block `B` contributing `(|B|-1)!`
/// times `κ_{Σ_{j∈B}(k_j - 1)}`.
pub fn forgetful_pushforward(ks: &[u32]) -> Result<KappaPoly> {
    if ks.iter().any(|&k| k == 0) {
        return Err(Error::Range("pushed-forward ψ exponents must be at least 1".into()));
    }
    let mut out = KappaPoly::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    set_partitions(ks.len(), 0, &mut blocks, &mut |blocks| {
        let mut weight = Rational::one();
        let mut idx: Vec<u32> = blocks
            .iter()
            .map(|b| {
                weight *= &Rational::factorial(b.len() as u32 - 1);
                b.iter().map(|&j| ks[j] - 1).sum()
            })
            .collect();
        idx.sort_unstable();
        *out.entry(idx).or_insert_with(Rational::zero) += &weight;
    });
    Ok(out)
}

fn set_partitions(m: usize, i: usize, blocks: &mut Vec<Vec<usize>>, f: &mut dyn FnMut(&[Vec<usize>])) {
    if i == m {
        f(blocks);
        return;
    }
    for b in 0..blocks.len() {
        blocks[b].push(i);
        set_partitions(m, i + 1, blocks, f);
        blocks[b].pop();
    }
    blocks.push(vec![i]);
    set_partitions(m, i + 1, blocks, f);
    blocks.pop();
}

type KappaKey = (u32, Vec<u32>, Vec<u32>);

fn kappa_cache() -> &'static DashMap<KappaKey, Rational> {
    static CACHE: OnceLock<DashMap<KappaKey, Rational>> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// `∫_{M̄_{g,n}} ψ^b κ_{c_1} ⋯ κ_{c_ℓ}`.
pub fn kappa_psi_correlator(g: u32, psi: &[u32], kappa: &[u32]) -> Result<Rational> {
    check_stable(g, psi.len())?;
    Ok(kappa_psi(g, psi.to_vec(), kappa.to_vec()))
}

fn kappa_psi(g: u32, mut psi: Vec<u32>, mut kappa: Vec<u32>) -> Rational {
    let n = psi.len();
    let deg: i64 = psi.iter().chain(&kappa).map(|&x| x as i64).sum();
    if deg != dim(g, n) {
        return Rational::zero();
    }
    if kappa.is_empty() {
        return psi_or_zero(g, psi);
    }
    psi.sort_unstable();
    kappa.sort_unstable();
    let key = (g, psi, kappa);
    if let Some(hit) = kappa_cache().get(&key) {
        return hit.clone();
    }
    let (_, psi, kappa) = &key;
    // ∫ ψ^b κ_{c_1..c_ℓ} = ∫_{n+1} ψ^b ψ_{n+1}^{c_ℓ+1} Π_{j<ℓ} (κ_{c_j} - ψ_{n+1}^{c_j})
    let (last, rest) = kappa.split_last().unwrap();
    let mut acc = Rational::zero();
    for mask in 0u32..(1 << rest.len()) {
        let mut extra = last + 1;
        let mut kept = Vec::new();
        for (j, &c) in rest.iter().enumerate() {
            if mask & (1 << j) != 0 {
                extra += c;
            } else {
                kept.push(c);
            }
        }
        let mut p = psi.clone();
        p.push(extra);
        let term = kappa_psi(g, p, kept);
        if mask.count_ones() % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    kappa_cache().insert(key, acc.clone());
    acc
}

/// Integrate a κ polynomial against a ψ monomial.
pub fn integrate_kappa_poly(g: u32, psi: &[u32], poly: &KappaPoly) -> Result<Rational> {
    check_stable(g, psi.len())?;
    let mut acc = Rational::zero();
    for (k, c) in poly {
        let v = kappa_psi(g, psi.to_vec(), k.clone());
        if !v.is_zero() {
            acc += &(c * &v);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn known_psi_values() {
        assert_eq!(psi_correlator(0, &[0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(psi_correlator(0, &[1, 0, 0, 0]).unwrap(), q(1, 1));
        assert_eq!(psi_correlator(1, &[1]).unwrap(), q(1, 24));
        assert_eq!(psi_correlator(2, &[4]).unwrap(), q(1, 1152));
        assert_eq!(psi_correlator(2, &[2, 3]).unwrap(), q(29, 5760));
        assert_eq!(psi_correlator(3, &[7]).unwrap(), q(1, 82944));
        assert_eq!(psi_correlator(1, &[1, 1]).unwrap(), q(1, 24));
        assert_eq!(psi_correlator(0, &[1, 1]), Err(Error::UnstablePair { g: 0, n: 2 }));
        assert_eq!(psi_correlator(1, &[0]).unwrap(), q(0, 1));
    }

    #[test]
    fn pushforward_examples() {
        let p = forgetful_pushforward(&[3]).unwrap();
        assert_eq!(p, KappaPoly::from([(vec![2], q(1, 1))]));
        let p = forgetful_pushforward(&[2, 3]).unwrap();
        assert_eq!(p, KappaPoly::from([(vec![1, 2], q(1, 1)), (vec![3], q(1, 1))]));
        let p = forgetful_pushforward(&[2, 2, 2]).unwrap();
        assert_eq!(
            p,
            KappaPoly::from([(vec![1, 1, 1], q(1, 1)), (vec![1, 2], q(3, 1)), (vec![3], q(2, 1))])
        );
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_psi_correlator(1, &[0], &[1]).unwrap(), q(1, 24));
        assert_eq!(kappa_psi_correlator(0, &[0, 0, 0, 0], &[1]).unwrap(), q(1, 1));
        assert_eq!(kappa_psi_correlator(0, &[0, 0, 0], &[1]).unwrap(), q(0, 1));
        // κ_0 = 2g - 2 + n
        assert_eq!(kappa_psi_correlator(1, &[1], &[0]).unwrap(), q(1, 24));
    }
}
