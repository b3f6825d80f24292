//! Witten's r-spin theory, shifted along `r e_{r-2}`.
//!
//! The shifted algebra on `V_r = <e_0, …, e_{r-2}>` with
//! `η_{ab} = δ_{a+b, r-2}` is the sl2 Verlinde algebra, and its R-matrix
//! is built from the hypergeometric series `B_{r,a}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::arith::{Matrix, Rational, TruncSeries, Var};
use crate::cohft::{FrobeniusData, RMatrix};
use crate::error::{Error, Result};
use crate::reconstruction::{Engine, Insertion, Theory};

/// `dim [ρ_{b_1} ⊗ ⋯ ⊗ ρ_{b_n}]^{sl2}` by iterated Clebsch–Gordan.
pub fn sl2_invariant_dim(weights: &[u32]) -> u64 {
    let mut mult: BTreeMap<u32, u64> = BTreeMap::from([(0, 1)]);
    for &b in weights {
        let mut next = BTreeMap::new();
        for (&a, &m) in &mult {
            let mut c = a.abs_diff(b);
            while c <= a + b {
                *next.entry(c).or_insert(0) += m;
                c += 2;
            }
        }
        mult = next;
    }
    mult.get(&0).copied().unwrap_or(0)
}

fn check_r(r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::Range(format!("r must be at least 2, got {r}")));
    }
    Ok(())
}

fn check_weight(r: u32, a: u32) -> Result<()> {
    if a > r - 2 {
        return Err(Error::Range(format!("weight {a} outside 0..={}", r - 2)));
    }
    Ok(())
}

/// Level-`r` fusion coefficient: the invariant dimension of
/// `ρ_a ⊗ ρ_b ⊗ ρ_c` when `a + b + c <= 2r - 4`, else 0.
pub fn fusion_coefficient(r: u32, a: u32, b: u32, c: u32) -> Result<u32> {
    check_r(r)?;
    for x in [a, b, c] {
        check_weight(r, x)?;
    }
    if a + b + c > 2 * r - 4 {
        return Ok(0);
    }
    Ok(sl2_invariant_dim(&[a, b, c]) as u32)
}

/// Frobenius data of the shifted theory.
pub fn rspin_frobenius(r: u32) -> Result<FrobeniusData> {
    check_r(r)?;
    let d = (r - 1) as usize;
    let labels = (0..d).map(|a| format!("e{a}")).collect();
    let eta = Matrix::from_fn(d, d, |a, b| if a + b == d - 1 { Rational::one() } else { Rational::zero() });
    FrobeniusData::new(
        labels,
        eta,
        |a, b, c| {
            let v = fusion_coefficient(r, a as u32, b as u32, r - 2 - c as u32).expect("weights in range");
            Rational::from(v)
        },
        0,
    )
}

/// `ω̂^r_{g,n}(e_{a_1}, …, e_{a_n})` by exact gluing.
pub fn rspin_topological_exact(r: u32, g: u32, a: &[u32]) -> Result<Rational> {
    for &x in a {
        check_weight(r.max(2), x)?;
    }
    let f = rspin_frobenius(r)?;
    let idx: Vec<usize> = a.iter().map(|&x| x as usize).collect();
    f.topological_correlator_basis(g, &idx)
}

/// The closed trigonometric form of `ω̂^r_{g,n}`, in floating point.
pub fn rspin_topological_float(r: u32, g: u32, a: &[u32]) -> f64 {
    let rf = r as f64;
    let n = a.len() as i32;
    let mut acc = 0.0;
    for k in 1..r {
        let kf = k as f64;
        let sign = if ((k as i64 - 1) * (g as i64 - 1)).rem_euclid(2) == 1 { -1.0 } else { 1.0 };
        let num: f64 = a.iter().map(|&ai| ((ai as f64 + 1.0) * kf * PI / rf).sin()).product();
        let den = (kf * PI / rf).sin().powi(2 * g as i32 - 2 + n);
        acc += sign * num / den;
    }
    (rf / 2.0).powi(g as i32 - 1) * acc
}

/// `B_{r,a}(z)` through `z^order`, split into even and odd parts.
pub fn bseries(r: u32, a: u32, order: usize) -> Result<(TruncSeries, TruncSeries)> {
    check_r(r)?;
    check_weight(r, a)?;
    let (r, a) = (r as i64, a as i64);
    let step = Rational::frac(-1, 16 * r * r);
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Rational::one();
    coeffs.push(c.clone());
    for i in 1..=order as i64 {
        let f = ((2 * i - 1) * r - 2 * (a + 1)) * ((2 * i - 1) * r + 2 * (a + 1));
        c = c * Rational::frac(f, i) * &step;
        coeffs.push(c.clone());
    }
    Ok(TruncSeries::truncated(Var::Z, order, coeffs).split_parity())
}

/// The R-matrix: `Be_{r,a}` on the diagonal, `Bo_{r,a}` in row `r-2-a` of
/// column `a`, and 1 at the centre when `r` is even.
pub fn rspin_rmatrix(r: u32, order: usize) -> Result<RMatrix> {
    check_r(r)?;
    let d = (r - 1) as usize;
    let mut coeffs = vec![Matrix::zeros(d, d); order + 1];
    for a in 0..d {
        let (even, odd) = bseries(r, a as u32, order)?;
        let anti = d - 1 - a;
        if anti == a {
            coeffs[0].set(a, a, Rational::one());
            continue;
        }
        for (k, m) in coeffs.iter_mut().enumerate() {
            m.set(a, a, even.coeff(k));
            if !odd.coeff(k).is_zero() {
                m.set(anti, a, odd.coeff(k));
            }
        }
    }
    RMatrix::new(coeffs)
}

/// The shifted theory with its R-matrix truncated at `order`.
pub fn rspin_theory(r: u32, order: usize) -> Result<Theory> {
    Ok(Theory { frobenius: rspin_frobenius(r)?, rmatrix: rspin_rmatrix(r, order)? })
}

/// `D^r_{g,n}(a) = ((r-2)(g-1) + Σ a_i) / r`, when integral.
pub fn witten_degree(r: u32, g: u32, a: &[u32]) -> Option<i64> {
    let num = (r as i64 - 2) * (g as i64 - 1) + a.iter().map(|&x| x as i64).sum::<i64>();
    (num % r as i64 == 0).then_some(num / r as i64)
}

/// `∫_{M̄_{g,n}} W^r_{g,n}(a) Π ψ_i^{b_i}`.
///
/// Zero unless the degree is integral and complements the ψ degree;
/// otherwise the matching degree part of the shifted class, evaluated by
/// the graph sum.
pub fn witten_integral(r: u32, g: u32, a: &[u32], psi: &[u32]) -> Result<Rational> {
    let n = a.len();
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::UnstablePair { g, n });
    }
    if psi.len() != n {
        return Err(Error::Range(format!("{} ψ exponents for {n} markings", psi.len())));
    }
    check_r(r)?;
    for &x in a {
        check_weight(r, x)?;
    }
    let dim = 3 * g as i64 - 3 + n as i64;
    match witten_degree(r, g, a) {
        Some(deg) if deg + psi.iter().map(|&b| b as i64).sum::<i64>() == dim => {}
        _ => return Ok(Rational::zero()),
    }
    let engine = Engine::new(rspin_theory(r, dim.max(0) as usize)?)?;
    witten_integral_with(&engine, g, a, psi)
}

/// [`witten_integral`] on a prebuilt engine for the shifted theory.
pub fn witten_integral_with(engine: &Engine, g: u32, a: &[u32], psi: &[u32]) -> Result<Rational> {
    let r = engine.frobenius().dim() as u32 + 1;
    let n = a.len();
    let dim = 3 * g as i64 - 3 + n as i64;
    match witten_degree(r, g, a) {
        Some(deg) if deg + psi.iter().map(|&b| b as i64).sum::<i64>() == dim => {}
        _ => return Ok(Rational::zero()),
    }
    let ins: Vec<Insertion> = a
        .iter()
        .zip(psi)
        .map(|(&ai, &b)| Insertion::new(engine.frobenius().basis(ai as usize), b))
        .collect();
    engine.correlator(g, &ins)
}

/// `(n-3)!/r^{n-3} · dim[⊗ ρ_{r-2-a_i}]^{sl2}`.
pub fn pixton_genus0(r: u32, a: &[u32]) -> Rational {
    let n = a.len() as u32;
    let weights: Vec<u32> = a.iter().map(|&x| r - 2 - x).collect();
    Rational::factorial(n - 3) / Rational::from(r).pow(n - 3) * Rational::from(sl2_invariant_dim(&weights) as i64)
}

/// Worst deviation in the idempotent identities, in floating point.
pub fn idempotent_check_float(r: u32) -> Result<f64> {
    let f = rspin_frobenius(r)?;
    let d = f.dim();
    let rf = r as f64;
    let to_f = |m: &Rational| m.to_f64();
    let v: Vec<Vec<f64>> = (1..r)
        .map(|k| {
            (0..d)
                .map(|a| (2.0 / rf).sqrt() * ((a as f64 + 1.0) * k as f64 * PI / rf).sin())
                .collect()
        })
        .collect();
    let pair = |x: &[f64], y: &[f64]| -> f64 {
        let mut s = 0.0;
        for a in 0..d {
            for b in 0..d {
                s += x[a] * y[b] * to_f(f.eta().get(a, b));
            }
        }
        s
    };
    let prod = |x: &[f64], y: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; d];
        for a in 0..d {
            for b in 0..d {
                for (c, o) in out.iter_mut().enumerate() {
                    *o += x[a] * y[b] * to_f(&f.basis_product(a, b)[c]);
                }
            }
        }
        out
    };
    let mut worst: f64 = 0.0;
    for k in 1..r as usize {
        for l in 1..r as usize {
            let expect = if k == l { if (k - 1) % 2 == 0 { 1.0 } else { -1.0 } } else { 0.0 };
            worst = worst.max((pair(&v[k - 1], &v[l - 1]) - expect).abs());
            let p = prod(&v[k - 1], &v[l - 1]);
            let scale = if k == l { (rf / 2.0).sqrt() / (k as f64 * PI / rf).sin() } else { 0.0 };
            for c in 0..d {
                worst = worst.max((p[c] - scale * v[k - 1][c]).abs());
            }
        }
    }
    Ok(worst)
}

/// First `m < order` at which the Euler recursion fails, if any.
///
/// `ξ` is twice the antidiagonal and `μ = diag(2a - (r-2)) / 2r`. With
/// `R_k` acting on column vectors the recursion reads
/// `[R_{m+1}, ξ] = R_m (m - μ)`.
pub fn euler_commutation_check(r: u32, order: usize) -> Result<Option<usize>> {
    let rm = rspin_rmatrix(r, order)?;
    let d = (r - 1) as usize;
    let xi = Matrix::from_fn(d, d, |a, b| if a + b == d - 1 { Rational::from(2) } else { Rational::zero() });
    for m in 0..order {
        let shift = Matrix::from_fn(d, d, |a, b| {
            if a == b {
                Rational::from(m) - Rational::frac(2 * a as i64 - (r as i64 - 2), 2 * r as i64)
            } else {
                Rational::zero()
            }
        });
        let lhs = rm.coeff(m + 1).mul(&xi)?.sub(&xi.mul(rm.coeff(m + 1))?)?;
        let rhs = rm.coeff(m).mul(&shift)?;
        if lhs != rhs {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Values of `r^{g-1} ∫ W^r` for a range of `r`, for probing
/// polynomiality in `r`. The weights are given as offsets from `r - 2`
/// when `from_top` is set, so that they stay in range as `r` grows.
pub fn polynomiality_scan(
    g: u32,
    a: &[u32],
    psi: &[u32],
    from_top: bool,
    r_values: impl IntoIterator<Item = u32>,
) -> Result<Vec<(u32, Rational)>> {
    let mut out = Vec::new();
    for r in r_values {
        let weights: Vec<u32> = if from_top {
            match a.iter().map(|&x| (r - 2).checked_sub(x)).collect::<Option<Vec<_>>>() {
                Some(w) => w,
                None => continue,
            }
        } else {
            if a.iter().any(|&x| x + 2 > r) {
                continue;
            }
            a.to_vec()
        };
        let v = witten_integral(r, g, &weights, psi)?;
        out.push((r, v * Rational::from(r).powi(g as i32 - 1)?));
    }
    Ok(out)
}
