//! Fock-space model of the equivariant quantum cohomology of `Hilb^m(C²)`.
//!
//! Basis vectors are `|μ⟩ = Π α_{-μ_i} |0⟩ / z(μ)`. In this basis
//! `α_k |μ⟩ = |μ ∖ k⟩` and `α_{-k} |μ⟩ = k (m_k(μ) + 1) |μ ∪ k⟩`.
//! Matrices are indexed `[row][column]` with the column holding the image
//! of a basis vector, and partitions are listed in reverse-lexicographic
//! order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{Matrix, MPoly, Monomial, Rational, RationalFunction, Ring, TruncSeries, Var};
use crate::error::{Error, Result};

/// A partition with weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Range("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, k: u32) -> u32 {
        self.0.iter().filter(|&&p| p == k).count() as u32
    }

    /// `z(μ) = Π_k k^{m_k} m_k!`.
    pub fn z(&self) -> Rational {
        let mut acc = Rational::one();
        let mut i = 0;
        while i < self.0.len() {
            let k = self.0[i];
            let m = self.multiplicity(k);
            acc *= &(Rational::from(k).pow(m) * Rational::factorial(m));
            i += m as usize;
        }
        acc
    }

    fn with_part(&self, k: u32) -> Partition {
        let mut p = self.0.clone();
        let at = p.iter().position(|&x| x < k).unwrap_or(p.len());
        p.insert(at, k);
        Partition(p)
    }

    fn without_part(&self, k: u32) -> Option<Partition> {
        let at = self.0.iter().position(|&x| x == k)?;
        let mut p = self.0.clone();
        p.remove(at);
        Some(Partition(p))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| x.trim().parse::<u32>().map_err(|e| Error::Parse(format!("partition part {x:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Partitions of `m` in reverse-lexicographic order.
pub fn partitions(m: u32) -> Vec<Partition> {
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for k in (1..=left.min(max)).rev() {
            cur.push(k);
            rec(left - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

fn t1t2() -> MPoly {
    MPoly::t1().mul(&MPoly::t2())
}

fn check_sizes(mu: &Partition, nu: &Partition) -> Result<()> {
    if mu.size() != nu.size() {
        return Err(Error::SizeMismatch { left: mu.size(), right: nu.size() });
    }
    Ok(())
}

/// `⟨μ|μ⟩ = (-1)^{|μ|-ℓ(μ)} / ((t1 t2)^{ℓ(μ)} z(μ))`.
fn norm(mu: &Partition) -> RationalFunction {
    let sign = if (mu.size() as usize - mu.len()) % 2 == 0 { 1 } else { -1 };
    let c = Rational::from(sign) / mu.z();
    RationalFunction::new(MPoly::constant(c), t1t2().pow(mu.len() as u32)).expect("nonzero")
}

/// The pairing on the Nakajima basis.
pub fn fock_inner(mu: &Partition, nu: &Partition) -> Result<RationalFunction> {
    check_sizes(mu, nu)?;
    Ok(if mu == nu { norm(mu) } else { RationalFunction::zero() })
}

/// Finite combination of basis vectors `|μ⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<C: Ring = RationalFunction> {
    terms: BTreeMap<Partition, C>,
}

impl<C: Ring> Default for FockVector<C> {
    fn default() -> Self {
        FockVector { terms: BTreeMap::new() }
    }
}

impl<C: Ring> FockVector<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(mu: Partition) -> Self {
        FockVector { terms: BTreeMap::from([(mu, C::one())]) }
    }

    pub fn get(&self, mu: &Partition) -> C {
        self.terms.get(mu).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mu: Partition, c: &C) {
        let slot = self.terms.entry(mu).or_insert_with(C::zero);
        slot.add_assign_ref(c);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for (mu, v) in &other.terms {
            self.add_term(mu.clone(), &v.times(c));
        }
    }

    /// `α_k` for `k != 0`: annihilation for `k > 0`, creation for `k < 0`.
    pub fn alpha(&self, k: i64) -> Self {
        assert!(k != 0, "α_0 is not part of the Heisenberg algebra");
        let mut out = Self::zero();
        let a = k.unsigned_abs() as u32;
        for (mu, c) in &self.terms {
            if k > 0 {
                if let Some(nu) = mu.without_part(a) {
                    out.add_term(nu, c);
                }
            } else {
                let w = Rational::from(a as i64 * (mu.multiplicity(a) as i64 + 1));
                out.add_term(mu.with_part(a), &c.scaled(&w));
            }
        }
        out
    }
}

impl FockVector<RationalFunction> {
    pub fn inner(&self, other: &Self) -> Result<RationalFunction> {
        if let (Some(a), Some(b)) = (self.terms.keys().next(), other.terms.keys().next()) {
            check_sizes(a, b)?;
        }
        let mut acc = RationalFunction::zero();
        for (mu, c) in &self.terms {
            if let Some(d) = other.terms.get(mu) {
                acc = acc.add(&c.mul(d).mul(&norm(mu)));
            }
        }
        Ok(acc)
    }
}

/// Matrix of quantum multiplication by `D` on `F_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct MDMatrix<C: Ring = RationalFunction> {
    pub m: u32,
    pub basis: Vec<Partition>,
    pub entries: Matrix<C>,
}

impl<C: Ring> MDMatrix<C> {
    pub fn index_of(&self, mu: &Partition) -> Result<usize> {
        self.basis
            .iter()
            .position(|p| p == mu)
            .ok_or(Error::SizeMismatch { left: mu.size(), right: self.m })
    }

    /// The `λ`-component of `M_D |μ⟩`.
    pub fn entry(&self, lambda: &Partition, mu: &Partition) -> Result<&C> {
        Ok(self.entries.get(self.index_of(lambda)?, self.index_of(mu)?))
    }

    pub fn apply(&self, v: &FockVector<C>) -> Result<FockVector<C>> {
        let mut out = FockVector::zero();
        for (mu, c) in v.terms() {
            let j = self.index_of(mu)?;
            for (i, lambda) in self.basis.iter().enumerate() {
                let e = self.entries.get(i, j);
                if !e.is_zero() {
                    out.add_term(lambda.clone(), &e.times(c));
                }
            }
        }
        Ok(out)
    }
}

impl MDMatrix<RationalFunction> {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "basis": self.basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "entries": (0..self.basis.len())
                .map(|i| (0..self.basis.len()).map(|j| self.entries.get(i, j).to_json()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// `⟨λ|M_D μ⟩ = ⟨M_D λ|μ⟩` for every pair of basis vectors.
    pub fn is_self_adjoint(&self) -> bool {
        let n = self.basis.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let a = self.entries.get(i, j).mul(&norm(&self.basis[i]));
                let b = self.entries.get(j, i).mul(&norm(&self.basis[j]));
                a == b
            })
        })
    }
}

/// The splitting and joining parts of `M_D|ν⟩` with unit coefficients:
/// `Σ α_{-k} α_{-l} α_{k+l}` and `Σ α_{-k-l} α_k α_l`.
fn cubic_terms(nu: &Partition) -> (FockVector<Rational>, FockVector<Rational>) {
    let m = nu.size() as i64;
    let v = FockVector::<Rational>::basis(nu.clone());
    let mut split = FockVector::zero();
    let mut join = FockVector::zero();
    for j in 2..=m {
        let down = v.alpha(j);
        if down.is_zero() {
            continue;
        }
        for k in 1..j {
            split.add_scaled(&down.alpha(-(j - k)).alpha(-k), &Rational::one());
        }
    }
    for l in 1..m {
        let down = v.alpha(l);
        if down.is_zero() {
            continue;
        }
        for k in 1..=(m - l) {
            let both = down.alpha(k);
            if !both.is_zero() {
                join.add_scaled(&both.alpha(-(k + l)), &Rational::one());
            }
        }
    }
    (split, join)
}

/// `M_D` over any coefficient ring, given the images of
/// `c_k = ((-q)^k+1)/((-q)^k-1)`, of `t1`, `t2`, and a common factor
/// `scale` multiplying everything (the `c_k` are expected to carry it
/// already).
fn md_generic<C: Ring>(m: u32, c: &(dyn Fn(u32) -> C + Sync), t1: &C, t2: &C, scale: &C) -> MDMatrix<C> {
    let basis = partitions(m);
    let ts = t1.plus(t2);
    let split_coef = t1.times(t2).times(scale).scaled(&Rational::frac(1, 2));
    let join_coef = scale.scaled(&Rational::frac(-1, 2));
    let columns: Vec<Vec<C>> = basis
        .par_iter()
        .map(|nu| {
            let mut diag = c(1).scaled(&Rational::frac(-(m as i64), 2));
            for k in 1..=m {
                let mk = nu.multiplicity(k);
                if mk > 0 {
                    diag.add_assign_ref(&c(k).scaled(&Rational::frac((k * k * mk) as i64, 2)));
                }
            }
            let diag = diag.times(&ts);
            let (split, join) = cubic_terms(nu);
            basis
                .iter()
                .map(|lambda| {
                    let mut e = if lambda == nu { diag.clone() } else { C::zero() };
                    let s = split.get(lambda);
                    if !s.is_zero() {
                        e.add_assign_ref(&split_coef.scaled(&s));
                    }
                    let j = join.get(lambda);
                    if !j.is_zero() {
                        e.add_assign_ref(&join_coef.scaled(&j));
                    }
                    e
                })
                .collect()
        })
        .collect();
    let n = basis.len();
    let entries = Matrix::from_fn(n, n, |i, j| columns[j][i].clone());
    MDMatrix { m, basis, entries }
}

fn check_m(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::Range("m must be at least 1".into()));
    }
    Ok(())
}

fn neg_q_pow(k: u32) -> MPoly {
    MPoly::q().neg().pow(k)
}

/// `c_k = ((-q)^k + 1) / ((-q)^k - 1)`.
pub fn c_k(k: u32) -> RationalFunction {
    let x = neg_q_pow(k);
    RationalFunction::new(x.add(&MPoly::one()), x.sub(&MPoly::one())).expect("nonzero denominator")
}

/// `M_D` on `F_m` with exact rational-function entries.
pub fn md_matrix(m: u32) -> Result<MDMatrix> {
    check_m(m)?;
    let t1 = RationalFunction::from_poly(MPoly::t1());
    let t2 = RationalFunction::from_poly(MPoly::t2());
    Ok(md_generic(m, &c_k, &t1, &t2, &RationalFunction::one()))
}

/// `M_D` with entries expanded in `q` through `q^order`, built from
/// truncated-series inverses of `(-q)^k - 1`.
pub fn md_matrix_series(m: u32, order: usize) -> Result<MDMatrix<TruncSeries<RationalFunction>>> {
    check_m(m)?;
    let lift = |p: MPoly| TruncSeries::truncated(Var::Q, order, vec![RationalFunction::from_poly(p)]);
    let c = |k: u32| {
        let mut x = vec![RationalFunction::zero(); k as usize + 1];
        x[k as usize] = RationalFunction::constant(if k % 2 == 0 { Rational::one() } else { Rational::from(-1) });
        let x = TruncSeries::truncated(Var::Q, order, x);
        let one = TruncSeries::truncated(Var::Q, order, vec![RationalFunction::one()]);
        let den = x.minus(&one).inverse().expect("unit constant term");
        x.plus(&one).times(&den)
    };
    let one = TruncSeries::truncated(Var::Q, order, vec![RationalFunction::one()]);
    Ok(md_generic(m, &c, &lift(MPoly::t1()), &lift(MPoly::t2()), &one))
}

/// `Σ_d ⟨μ¹, D, μ²⟩_{0,3,d} q^d = ⟨μ¹|M_D|μ²⟩`.
pub fn three_point_series(mu1: &Partition, mu2: &Partition) -> Result<RationalFunction> {
    check_sizes(mu1, mu2)?;
    let md = md_matrix(mu1.size())?;
    Ok(md.entry(mu1, mu2)?.mul(&norm(mu1)))
}

/// The same series re-derived with truncated `q`-series arithmetic.
pub fn three_point_truncated(mu1: &Partition, mu2: &Partition, order: usize) -> Result<TruncSeries<RationalFunction>> {
    check_sizes(mu1, mu2)?;
    let md = md_matrix_series(mu1.size(), order)?;
    let g = TruncSeries::truncated(Var::Q, order, vec![norm(mu1)]);
    Ok(md.entry(mu1, mu2)?.times(&g))
}

/// `Φ_d(q)`, by dividing `q^d - 1` by the lower cyclotomic factors.
fn cyclotomic(d: u32) -> MPoly {
    let mut p = MPoly::q().pow(d).sub(&MPoly::one());
    for e in 1..d {
        if d % e == 0 {
            p = p.div_exact(&cyclotomic(e)).expect("cyclotomic factor divides");
        }
    }
    p
}

fn substitute_neg_q(p: &MPoly) -> MPoly {
    p.compose(&[MPoly::t1(), MPoly::t2(), MPoly::q().neg()])
}

/// `Π_{i<j} (λ_i - λ_j)²` as the Hankel determinant of the power sums
/// `tr(A^k)`, `0 <= k <= 2n-2`.
fn hankel_discriminant<C: Ring>(a: &Matrix<C>, det: impl Fn(Vec<Vec<C>>) -> C) -> Result<C> {
    let n = a.rows();
    let mut power = Matrix::<C>::identity(n);
    let mut sums = Vec::with_capacity(2 * n - 1);
    for k in 0..2 * n - 1 {
        if k > 0 {
            power = power.mul(a)?;
        }
        let mut tr = C::zero();
        for i in 0..n {
            tr.add_assign_ref(power.get(i, i));
        }
        sums.push(tr);
    }
    let h = (0..n).map(|i| (0..n).map(|j| sums[i + j].clone()).collect()).collect();
    Ok(det(h))
}

/// Determinant over a field, by Gaussian elimination.
pub fn det_field<C: Ring>(mut a: Vec<Vec<C>>) -> C {
    let n = a.len();
    let mut acc = C::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return C::zero();
        };
        if p != k {
            a.swap(p, k);
            acc = acc.negated();
        }
        let inv = a[k][k].try_inv().expect("field element");
        acc = acc.times(&a[k][k]);
        for i in k + 1..n {
            let f = a[i][k].times(&inv);
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = a[i][j].minus(&f.times(&a[k][j]));
                a[i][j] = v;
            }
        }
    }
    acc
}

/// Dense univariate helpers over `Q`, lowest degree first.
mod dense {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    use crate::arith::Rational;

    /// `Π_{i<j} (λ_i - λ_j)²` for an integer matrix: Hankel determinant of
    /// the power sums, by fraction-free elimination.
    pub fn integer_discriminant(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        let mul = |x: &[Vec<BigInt>], y: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                        .collect()
                })
                .collect()
        };
        let mut power: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        let mut sums = Vec::with_capacity(2 * n - 1);
        for k in 0..2 * n - 1 {
            if k > 0 {
                power = mul(&power, a);
            }
            sums.push((0..n).fold(BigInt::zero(), |acc, i| acc + &power[i][i]));
        }
        let mut h: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| sums[i + j].clone()).collect()).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if h[k][k].is_zero() {
                match (k + 1..n).find(|&i| !h[i][k].is_zero()) {
                    Some(i) => {
                        h.swap(i, k);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    h[i][j] = (&h[k][k] * &h[i][j] - &h[i][k] * &h[k][j]) / &prev;
                }
            }
            prev = h[k][k].clone();
        }
        let d = h[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Newton interpolation through `(x_i, y_i)`, returned in the
    /// monomial basis.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
            }
        }
        let mut out = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            // out = out * (x - xs[i]) + dd[i]
            let mut next = vec![Rational::zero(); n];
            for k in 0..n - 1 {
                if !out[k].is_zero() {
                    next[k + 1] += &out[k];
                    next[k] -= &(&out[k] * &xs[i]);
                }
            }
            next[0] += &dd[i];
            out = next;
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Quotient of `p` by `f`, if the division is exact.
    pub fn div_exact(p: &[Rational], f: &[Rational]) -> Option<Vec<Rational>> {
        if p.is_empty() {
            return Some(Vec::new());
        }
        let df = f.len() - 1;
        if p.len() < f.len() {
            return None;
        }
        let lead = f[df].recip().ok()?;
        let mut rem = p.to_vec();
        let mut quot = vec![Rational::zero(); p.len() - df];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + df] * &lead;
            if c.is_zero() {
                continue;
            }
            for (j, fj) in f.iter().enumerate() {
                rem[k + j] -= &(&c * fj);
            }
            quot[k] = c;
        }
        rem.iter().all(|r| r.is_zero()).then_some(quot)
    }
}

/// Discriminant of the characteristic polynomial of `M_D` on `F_m`.
/// Nonzero means `M_D` has distinct eigenvalues.
///
/// Works with `L(q) M_D`, where `L = Π_{d<=m} Φ_d(-q)` clears every
/// denominator, at `t1 = 1`: scaling `t ↦ τt` conjugates `M_D` to `τ M_D`
/// (by `τ^{ℓ(μ)}` on `|μ⟩`), so the discriminant is homogeneous of degree
/// `n(n-1)` in `(t1, t2)`. The polynomial in `(t2, q)` is recovered by
/// exact evaluation on a grid sized by the entry degrees and
/// interpolation, then divided by `L^{n(n-1)}` one cyclotomic factor at a
/// time.
pub fn semisimplicity_witness(m: u32) -> Result<RationalFunction> {
    if m < 2 {
        return Err(Error::Range("the witness needs m >= 2".into()));
    }
    let factors: Vec<MPoly> = (1..=m).map(|d| substitute_neg_q(&cyclotomic(d))).collect();
    let l = factors.iter().fold(MPoly::one(), |acc, f| acc.mul(f));
    let c = |k: u32| {
        let x = neg_q_pow(k);
        let cofactor = l.div_exact(&x.sub(&MPoly::one())).expect("denominator divides L");
        x.add(&MPoly::one()).mul(&cofactor)
    };
    let md = md_generic(m, &c, &MPoly::one(), &MPoly::t2(), &l);
    let n = md.basis.len();
    let top = (n * (n - 1)) as u32;
    let entry_deg = |var: usize| {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| md.entries.get(i, j).degree_in(var))
            .max()
            .unwrap_or(0)
    };
    let (dt, dq) = ((top * entry_deg(1)) as usize, (top * entry_deg(2)) as usize);
    // integer entries: scale by the common denominator of every coefficient
    let mut scale = BigInt::one();
    for i in 0..n {
        for j in 0..n {
            for (_, c) in md.entries.get(i, j).terms() {
                scale = scale.lcm(c.denom());
            }
        }
    }
    let int_entries: Vec<Vec<Vec<(BigInt, u32, u32)>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    md.entries
                        .get(i, j)
                        .terms()
                        .map(|(mono, c)| ((c.numer() * &scale) / c.denom(), mono.0[1], mono.0[2]))
                        .collect()
                })
                .collect()
        })
        .collect();
    let half = |d: usize| (0..=d as i64).map(|i| i - d as i64 / 2).collect::<Vec<i64>>();
    let ts: Vec<i64> = half(dt);
    let qs: Vec<i64> = half(dq);
    let qr: Vec<Rational> = qs.iter().map(|&x| Rational::from(x)).collect();
    let tr: Vec<Rational> = ts.iter().map(|&x| Rational::from(x)).collect();
    let rescale = Rational::new(BigInt::one(), scale.pow(top))?;
    // rows[a] = disc(t2 = ts[a]) as a polynomial in q
    let rows: Vec<Vec<Rational>> = ts
        .par_iter()
        .map(|&t2| {
            let vals: Vec<Rational> = qs
                .iter()
                .map(|&q| {
                    let (t2, q) = (BigInt::from(t2), BigInt::from(q));
                    let a: Vec<Vec<BigInt>> = int_entries
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|terms| {
                                    terms.iter().fold(BigInt::zero(), |acc, (c, et, eq)| {
                                        acc + c * Pow::pow(&t2, *et) * Pow::pow(&q, *eq)
                                    })
                                })
                                .collect()
                        })
                        .collect();
                    Rational::from_int(dense::integer_discriminant(&a)) * &rescale
                })
                .collect();
            dense::interpolate(&qr, &vals)
        })
        .collect();
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    // grid[k] = coefficient of q^k as a polynomial in t2
    let mut grid: Vec<Vec<Rational>> = (0..width)
        .map(|k| {
            let ys: Vec<Rational> = rows.iter().map(|r| r.get(k).cloned().unwrap_or_else(Rational::zero)).collect();
            dense::interpolate(&tr, &ys)
        })
        .collect();
    // transpose to polynomials in q indexed by the power of t2
    let height = grid.iter().map(Vec::len).max().unwrap_or(0);
    let mut by_t: Vec<Vec<Rational>> = (0..height)
        .map(|j| {
            let mut col: Vec<Rational> =
                grid.iter_mut().map(|g| g.get(j).cloned().unwrap_or_else(Rational::zero)).collect();
            while col.last().is_some_and(|c| c.is_zero()) {
                col.pop();
            }
            col
        })
        .collect();
    if by_t.iter().all(Vec::is_empty) {
        return Ok(RationalFunction::zero());
    }
    let mut den = MPoly::one();
    for f in &factors {
        let fq: Vec<Rational> = (0..=f.degree_in(2).unwrap_or(0))
            .map(|k| f.terms().find(|(mono, _)| mono.0[2] == k).map_or_else(Rational::zero, |(_, c)| c.clone()))
            .collect();
        let mut e = top;
        while e > 0 {
            let divided: Option<Vec<Vec<Rational>>> = by_t.iter().map(|p| dense::div_exact(p, &fq)).collect();
            match divided {
                Some(next) => {
                    by_t = next;
                    e -= 1;
                }
                _ => break,
            }
        }
        den = den.mul(&f.pow(e));
    }
    let mut terms = Vec::new();
    for (j, p) in by_t.iter().enumerate() {
        for (k, c) in p.iter().enumerate() {
            if !c.is_zero() {
                terms.push((Monomial([top - j as u32, j as u32, k as u32]), c.clone()));
            }
        }
    }
    Ok(RationalFunction::from_coprime(MPoly::from_terms(terms), den))
}

/// The discriminant for a matrix over a field, without clearing
/// denominators.
pub fn discriminant_over_field<C: Ring>(a: &Matrix<C>) -> Result<C> {
    hankel_discriminant(a, det_field)
}
