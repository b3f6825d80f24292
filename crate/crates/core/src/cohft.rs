//! Frobenius data of a CohFT with unit, its topological part, R-matrices
//! and the edge kernel of the graph sum.

use serde_json::Value;

use crate::arith::{bernoulli_numbers, series_divide_bivariate, BiSeries, Matrix, Rational, Ring, TruncSeries, Var};
use crate::error::{Error, Result};

/// `(V, η, 1)` together with the genus-0 three-point values.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusData<C: Ring = Rational> {
    dim: usize,
    labels: Vec<String>,
    eta: Matrix<C>,
    eta_inv: Matrix<C>,
    three_point: Vec<C>,
    unit: usize,
    /// `mult[i][j]` = coordinates of `e_i • e_j`
    mult: Vec<Vec<Vec<C>>>,
    handle: Vec<C>,
}

impl<C: Ring> FrobeniusData<C> {
    /// Validate and build. `three_point(i, j, k)` gives `Ω_{0,3}(e_i, e_j, e_k)`.
    pub fn new(
        labels: Vec<String>,
        eta: Matrix<C>,
        mut three_point: impl FnMut(usize, usize, usize) -> C,
        unit: usize,
    ) -> Result<Self> {
        let d = labels.len();
        if eta.rows() != d || eta.cols() != d {
            return Err(Error::InvalidTheory(format!("pairing is not {d}x{d}")));
        }
        if unit >= d {
            return Err(Error::InvalidTheory(format!("unit index {unit} out of range")));
        }
        if !eta.is_symmetric() {
            return Err(Error::InvalidTheory("pairing is not symmetric".into()));
        }
        let eta_inv = eta.inverse()?;
        let mut tp = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    tp.push(three_point(i, j, k));
                }
            }
        }
        let at = |i: usize, j: usize, k: usize| &tp[(i * d + j) * d + k];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = at(i, j, k);
                    if v != at(j, i, k) || v != at(i, k, j) {
                        return Err(Error::InvalidTheory(format!(
                            "three-point values not symmetric at ({i},{j},{k})"
                        )));
                    }
                }
                if at(i, j, unit) != eta.get(i, j) {
                    return Err(Error::InvalidTheory(format!("unit axiom fails at ({i},{j})")));
                }
            }
        }
        let mult: Vec<Vec<Vec<C>>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|k| {
                                let mut acc = C::zero();
                                for l in 0..d {
                                    let a = at(i, j, l);
                                    let b = eta_inv.get(l, k);
                                    if !a.is_zero() && !b.is_zero() {
                                        acc.add_assign_ref(&a.times(b));
                                    }
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut data = FrobeniusData {
            dim: d,
            labels,
            eta,
            eta_inv,
            three_point: tp,
            unit,
            mult,
            handle: Vec::new(),
        };
        data.check_associative()?;
        data.handle = data.compute_handle();
        Ok(data)
    }

    fn check_associative(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let left = self.product(&self.mult[i][j], &self.basis(k));
                    let right = self.product(&self.basis(i), &self.mult[j][k]);
                    if left != right {
                        return Err(Error::InvalidTheory(format!(
                            "product is not associative at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_handle(&self) -> Vec<C> {
        let mut h = vec![C::zero(); self.dim];
        for j in 0..self.dim {
            for k in 0..self.dim {
                let c = self.eta_inv.get(j, k);
                if c.is_zero() {
                    continue;
                }
                for (hl, m) in h.iter_mut().zip(&self.mult[j][k]) {
                    hl.add_assign_ref(&c.times(m));
                }
            }
        }
        h
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn eta(&self) -> &Matrix<C> {
        &self.eta
    }

    pub fn eta_inv(&self) -> &Matrix<C> {
        &self.eta_inv
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn three_point(&self, i: usize, j: usize, k: usize) -> &C {
        &self.three_point[(i * self.dim + j) * self.dim + k]
    }

    pub fn basis(&self, i: usize) -> Vec<C> {
        let mut v = vec![C::zero(); self.dim];
        v[i] = C::one();
        v
    }

    pub fn unit(&self) -> Vec<C> {
        self.basis(self.unit)
    }

    /// `Σ η^{jk} e_j • e_k`.
    pub fn handle(&self) -> &[C] {
        &self.handle
    }

    /// Coordinates of `e_i • e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[C] {
        &self.mult[i][j]
    }

    pub fn product(&self, u: &[C], v: &[C]) -> Vec<C> {
        let mut out = vec![C::zero(); self.dim];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.times(b);
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    if !m.is_zero() {
                        o.add_assign_ref(&ab.times(m));
                    }
                }
            }
        }
        out
    }

    pub fn pairing(&self, u: &[C], v: &[C]) -> C {
        let mut acc = C::zero();
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                let e = self.eta.get(i, j);
                if !b.is_zero() && !e.is_zero() {
                    acc.add_assign_ref(&a.times(b).times(e));
                }
            }
        }
        acc
    }

    /// `ε(v) = η(v, 1)`.
    pub fn counit(&self, v: &[C]) -> C {
        let mut acc = C::zero();
        for (i, a) in v.iter().enumerate() {
            let e = self.eta.get(i, self.unit);
            if !a.is_zero() && !e.is_zero() {
                acc.add_assign_ref(&a.times(e));
            }
        }
        acc
    }

    /// The unique `w` with `η(w, e_k) = Ω_{0,3}(u, v, e_k)` for all `k`.
    pub fn quantum_product(&self, u: &[C], v: &[C]) -> Result<Vec<C>> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(Error::Range(format!("vectors must have length {}", self.dim)));
        }
        Ok(self.product(u, v))
    }

    /// `ω_{g,n}(v_1, …, v_n)` by the caterpillar decomposition:
    /// `ε(v_1 • ⋯ • v_n • H^g)`.
    pub fn topological_correlator(&self, g: u32, vectors: &[Vec<C>]) -> Result<C> {
        check_stable(g, vectors.len())?;
        self.check_vectors(vectors)?;
        let mut acc = self.unit();
        for v in vectors {
            acc = self.product(&acc, v);
        }
        for _ in 0..g {
            acc = self.product(&acc, &self.handle);
        }
        Ok(self.counit(&acc))
    }

    pub fn topological_correlator_basis(&self, g: u32, indices: &[usize]) -> Result<C> {
        if let Some(&i) = indices.iter().find(|&&i| i >= self.dim) {
            return Err(Error::Range(format!("basis index {i} out of range")));
        }
        let vs: Vec<Vec<C>> = indices.iter().map(|&i| self.basis(i)).collect();
        self.topological_correlator(g, &vs)
    }

    /// Same value via a different decomposition: non-separating gluing
    /// down to genus 0, then splitting off the first two legs.
    pub fn topological_correlator_by_gluing(&self, g: u32, vectors: &[Vec<C>]) -> Result<C> {
        check_stable(g, vectors.len())?;
        self.check_vectors(vectors)?;
        Ok(self.glue(g, vectors))
    }

    fn glue(&self, g: u32, vectors: &[Vec<C>]) -> C {
        let n = vectors.len();
        if g == 0 && n == 3 {
            let mut acc = C::zero();
            for (i, a) in vectors[0].iter().enumerate() {
                for (j, b) in vectors[1].iter().enumerate() {
                    for (k, c) in vectors[2].iter().enumerate() {
                        let t = self.three_point(i, j, k);
                        if !a.is_zero() && !b.is_zero() && !c.is_zero() && !t.is_zero() {
                            acc.add_assign_ref(&a.times(b).times(c).times(t));
                        }
                    }
                }
            }
            return acc;
        }
        if g == 0 {
            // ω(v1, v2, rest) = Σ η^{jk} ω_{0,3}(v1, v2, e_j) ω_{0,n-1}(e_k, rest)
            let mut acc = C::zero();
            for j in 0..self.dim {
                let left = self.glue(0, &[vectors[0].clone(), vectors[1].clone(), self.basis(j)]);
                if left.is_zero() {
                    continue;
                }
                for k in 0..self.dim {
                    let e = self.eta_inv.get(j, k);
                    if e.is_zero() {
                        continue;
                    }
                    let mut rest = vec![self.basis(k)];
                    rest.extend_from_slice(&vectors[2..]);
                    acc.add_assign_ref(&left.times(e).times(&self.glue(0, &rest)));
                }
            }
            return acc;
        }
        let mut acc = C::zero();
        for j in 0..self.dim {
            for k in 0..self.dim {
                let e = self.eta_inv.get(j, k);
                if e.is_zero() {
                    continue;
                }
                let mut vs = vectors.to_vec();
                vs.push(self.basis(j));
                vs.push(self.basis(k));
                acc.add_assign_ref(&e.times(&self.glue(g - 1, &vs)));
            }
        }
        acc
    }

    fn check_vectors(&self, vectors: &[Vec<C>]) -> Result<()> {
        if vectors.iter().any(|v| v.len() != self.dim) {
            return Err(Error::Range(format!("vectors must have length {}", self.dim)));
        }
        Ok(())
    }

    /// The same data with coefficients mapped into a larger ring.
    pub fn map_ring<D: Ring>(&self, f: impl Fn(&C) -> D) -> Result<FrobeniusData<D>> {
        let d = self.dim;
        FrobeniusData::new(self.labels.clone(), self.eta.map(&f), |i, j, k| f(self.three_point(i, j, k)), self.unit)
            .map(|x| {
                debug_assert_eq!(x.dim, d);
                x
            })
    }
}

impl FrobeniusData<Rational> {
    /// The one-dimensional theory with `ω_{g,n} = 1`.
    pub fn trivial() -> Self {
        FrobeniusData::new(vec!["1".into()], Matrix::identity(1), |_, _, _| Rational::one(), 0)
            .expect("trivial theory is valid")
    }

    /// Parse `{"dim", "eta", "threePoint": {"i,j,k": value}, "unit"}`.
    /// Unlisted three-point values are filled in by symmetry or set to 0.
    pub fn from_json(v: &Value) -> Result<Self> {
        let d = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("frobenius: missing \"dim\"".into()))? as usize;
        let eta = parse_matrix(v.get("eta").ok_or_else(|| Error::Parse("frobenius: missing \"eta\"".into()))?)?;
        let unit = v
            .get("unit")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("frobenius: missing \"unit\"".into()))? as usize;
        let mut tp = vec![None::<Rational>; d * d * d];
        let obj = v
            .get("threePoint")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("frobenius: missing \"threePoint\"".into()))?;
        for (key, val) in obj {
            let idx: Vec<usize> = key
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad threePoint key {key:?}")))?;
            if idx.len() != 3 || idx.iter().any(|&i| i >= d) {
                return Err(Error::Parse(format!("bad threePoint key {key:?}")));
            }
            let val = parse_rational(val)?;
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                let slot = &mut tp[(i * d + j) * d + k];
                match slot {
                    Some(old) if *old != val => {
                        return Err(Error::InvalidTheory(format!("conflicting threePoint values at {key:?}")))
                    }
                    _ => *slot = Some(val.clone()),
                }
            }
        }
        let labels = (0..d).map(|i| format!("e{i}")).collect();
        FrobeniusData::new(labels, eta, |i, j, k| tp[(i * d + j) * d + k].clone().unwrap_or_else(Rational::zero), unit)
    }
}

fn check_stable(g: u32, n: usize) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        Err(Error::UnstablePair { g, n })
    } else {
        Ok(())
    }
}

pub(crate) fn parse_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from)
            .ok_or_else(|| Error::Parse(format!("non-integer number {n}; use a \"p/q\" string"))),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

pub(crate) fn parse_matrix(v: &Value) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

/// `R(z) = Id + R_1 z + … + R_N z^N` acting on `V`; column `μ` of `R_k`
/// holds `R_k e_μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix<C: Ring = Rational> {
    coeffs: Vec<Matrix<C>>,
}

impl<C: Ring> RMatrix<C> {
    /// From `R_0, …, R_N`; `R_0` must be the identity.
    pub fn new(coeffs: Vec<Matrix<C>>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::InvalidTheory("empty R-matrix".into()))?;
        let d = first.rows();
        if *first != Matrix::identity(d) {
            return Err(Error::InvalidTheory("R_0 is not the identity".into()));
        }
        if coeffs.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::InvalidTheory("R-matrix coefficients differ in size".into()));
        }
        Ok(RMatrix { coeffs })
    }

    pub fn identity(d: usize, order: usize) -> Self {
        let mut coeffs = vec![Matrix::zeros(d, d); order + 1];
        coeffs[0] = Matrix::identity(d);
        RMatrix { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn coeff(&self, k: usize) -> &Matrix<C> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Matrix<C>] {
        &self.coeffs
    }

    /// Drop coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::InsufficientOrder { have: self.order(), need: order });
        }
        Ok(RMatrix { coeffs: self.coeffs[..=order].to_vec() })
    }

    /// The entry `R(z)[row][col]` as a truncated series.
    pub fn entry_series(&self, row: usize, col: usize) -> TruncSeries<C> {
        TruncSeries::truncated(Var::Z, self.order(), self.coeffs.iter().map(|m| m.get(row, col).clone()).collect())
    }

    /// First order `k` at which `R(z) η⁻¹ R(-z)ᵀ = η⁻¹` fails, if any.
    pub fn symplectic_defect(&self, eta_inv: &Matrix<C>) -> Result<Option<usize>> {
        for k in 0..=self.order() {
            let mut acc = if k == 0 { eta_inv.neg() } else { Matrix::zeros(self.dim(), self.dim()) };
            for i in 0..=k {
                let term = self.coeffs[i].mul(eta_inv)?.mul(&self.coeffs[k - i].transpose())?;
                acc = if (k - i) % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            if !acc.is_zero() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    pub fn check_symplectic(&self, eta_inv: &Matrix<C>) -> Result<()> {
        match self.symplectic_defect(eta_inv)? {
            Some(order) => Err(Error::NonSymplectic { order }),
            None => Ok(()),
        }
    }

    /// The `T`-vector series `T(z) = z (Id - R(z)) 1`.
    pub fn unit_translation(&self, unit: &[C]) -> Result<TSeries<C>> {
        let mut vectors = vec![vec![C::zero(); self.dim()]; self.order() + 2];
        for k in 2..=self.order() + 1 {
            vectors[k] = self.coeffs[k - 1].mul_vec(unit)?.iter().map(Ring::negated).collect();
        }
        Ok(TSeries { vectors })
    }

    pub fn map_ring<D: Ring>(&self, f: impl Fn(&C) -> D) -> RMatrix<D> {
        RMatrix { coeffs: self.coeffs.iter().map(|m| m.map(&f)).collect() }
    }
}

impl RMatrix<Rational> {
    /// Parse `{"order": N, "R": [R_1, …, R_N]}` (a leading identity
    /// `R_0` may be included).
    pub fn from_json(v: &Value, dim: usize) -> Result<Self> {
        let order = v
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("rmatrix: missing \"order\"".into()))? as usize;
        let mats = v
            .get("R")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("rmatrix: missing \"R\"".into()))?
            .iter()
            .map(parse_matrix)
            .collect::<Result<Vec<_>>>()?;
        let mut coeffs = if mats.len() == order + 1 { mats } else { std::iter::once(Matrix::identity(dim)).chain(mats).collect() };
        if coeffs.len() > order + 1 {
            return Err(Error::Parse(format!("rmatrix: {} coefficients for order {order}", coeffs.len() - 1)));
        }
        coeffs.resize(order + 1, Matrix::zeros(dim, dim));
        if coeffs[0].rows() != dim {
            return Err(Error::InvalidTheory(format!("R-matrix is not {dim}x{dim}")));
        }
        RMatrix::new(coeffs)
    }
}

/// Vectors `T_k` of the translation `T(z) = Σ T_k z^k`; `T_0 = T_1 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries<C: Ring = Rational> {
    vectors: Vec<Vec<C>>,
}

impl<C: Ring> TSeries<C> {
    /// `T_k`, zero beyond the stored range.
    pub fn get(&self, k: usize) -> Option<&[C]> {
        self.vectors.get(k).map(Vec::as_slice)
    }

    pub fn max_degree(&self) -> usize {
        self.vectors.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.vectors.iter().flatten().all(Ring::is_zero)
    }
}

/// Coefficients `Δ_{p,q}` of `(η⁻¹ - R(z) η⁻¹ R(w)ᵀ) / (z + w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeKernel<C: Ring = Rational> {
    order: usize,
    /// `delta[p][q]`, `p + q <= order`
    delta: Vec<Vec<Matrix<C>>>,
}

impl<C: Ring> EdgeKernel<C> {
    pub fn new(r: &RMatrix<C>, eta_inv: &Matrix<C>) -> Result<Self> {
        let n = r.order();
        let d = r.dim();
        if n == 0 {
            return Ok(EdgeKernel { order: 0, delta: vec![vec![Matrix::zeros(d, d)]] });
        }
        // products[i][j] = R_i η⁻¹ R_jᵀ
        let left: Vec<Matrix<C>> = r.coeffs().iter().map(|m| m.mul(eta_inv)).collect::<Result<_>>()?;
        let mut num: Vec<Vec<BiSeries<C>>> = vec![vec![BiSeries::zero(n); d]; d];
        for i in 0..=n {
            for j in 0..=n - i {
                let p = left[i].mul(&r.coeff(j).transpose())?;
                for a in 0..d {
                    for b in 0..d {
                        let mut c = p.get(a, b).negated();
                        if i == 0 && j == 0 {
                            c = eta_inv.get(a, b).plus(&c);
                        }
                        num[a][b].set(i, j, c);
                    }
                }
            }
        }
        let mut quot = Vec::with_capacity(d);
        for row in &num {
            let mut qrow = Vec::with_capacity(d);
            for s in row {
                qrow.push(series_divide_bivariate(s).map_err(|e| match e {
                    Error::NonDivisible { degree } => Error::NonSymplectic { order: degree },
                    other => other,
                })?);
            }
            quot.push(qrow);
        }
        let delta = (0..n)
            .map(|p| (0..n - p).map(|q| Matrix::from_fn(d, d, |a, b| quot[a][b].coeff(p, q))).collect())
            .collect();
        Ok(EdgeKernel { order: n - 1, delta })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `Δ_{p,q}`; `None` beyond the truncation order.
    pub fn get(&self, p: usize, q: usize) -> Option<&Matrix<C>> {
        self.delta.get(p).and_then(|row| row.get(q))
    }

    pub fn is_zero(&self) -> bool {
        self.delta.iter().flatten().all(Matrix::is_zero)
    }
}

/// `R(z) = exp(-Σ_{k≥1} B_{2k} / (2k(2k-1)) z^{2k-1})`, one-dimensional.
pub fn hodge_rmatrix(order: usize) -> RMatrix<Rational> {
    let b = bernoulli_numbers(order + 1);
    let mut exponent = vec![Rational::zero(); order + 1];
    for k in 1.. {
        let p = 2 * k - 1;
        if p > order {
            break;
        }
        let c = &b[2 * k] / &Rational::from((2 * k * (2 * k - 1)) as i64);
        exponent[p] = -c;
    }
    let series = TruncSeries::truncated(Var::Z, order, exponent).exp().expect("zero constant term");
    let coeffs = (0..=order)
        .map(|k| Matrix::from_fn(1, 1, |_, _| series.coeff(k)))
        .collect();
    RMatrix::new(coeffs).expect("R_0 = 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn hodge_coefficients() {
        let r = hodge_rmatrix(4);
        assert_eq!(*r.coeff(1).get(0, 0), q(-1, 12));
        assert_eq!(*r.coeff(2).get(0, 0), q(1, 288));
        r.check_symplectic(&Matrix::identity(1)).unwrap();
        let t = r.unit_translation(&[Rational::one()]).unwrap();
        assert_eq!(t.get(2).unwrap(), &[q(1, 12)]);
        assert!(t.get(0).unwrap()[0].is_zero() && t.get(1).unwrap()[0].is_zero());
    }

    #[test]
    fn kernel_of_exponential() {
        let e = TruncSeries::truncated(Var::Z, 3, vec![q(0, 1), q(-1, 1)]).exp().unwrap();
        let r = RMatrix::new((0..=3).map(|k| Matrix::from_fn(1, 1, |_, _| e.coeff(k))).collect()).unwrap();
        let k = EdgeKernel::new(&r, &Matrix::identity(1)).unwrap();
        assert_eq!(*k.get(0, 0).unwrap().get(0, 0), q(1, 1));
        assert_eq!(*k.get(1, 0).unwrap().get(0, 0), q(-1, 2));
        assert_eq!(*k.get(0, 1).unwrap().get(0, 0), q(-1, 2));
        assert!(EdgeKernel::new(&RMatrix::<Rational>::identity(2, 3), &Matrix::identity(2)).unwrap().is_zero());
    }

    #[test]
    fn non_symplectic_rejected() {
        let r = RMatrix::new(vec![Matrix::identity(1), Matrix::zeros(1, 1), Matrix::from_fn(1, 1, |_, _| q(1, 1))])
            .unwrap();
        assert_eq!(EdgeKernel::new(&r, &Matrix::identity(1)), Err(Error::NonSymplectic { order: 2 }));
        assert_eq!(r.check_symplectic(&Matrix::identity(1)), Err(Error::NonSymplectic { order: 2 }));
    }

    #[test]
    fn trivial_theory() {
        let f = FrobeniusData::trivial();
        for g in 0..3 {
            for n in 0..4usize {
                if 2 * g as i64 - 2 + n as i64 > 0 {
                    assert_eq!(f.topological_correlator_basis(g, &vec![0; n]).unwrap(), q(1, 1));
                }
            }
        }
        assert_eq!(f.quantum_product(&[q(1, 1)], &[q(1, 1)]).unwrap(), vec![q(1, 1)]);
    }

    #[test]
    fn json_theory() {
        let v: Value = serde_json::from_str(
            r#"{"dim":2,"eta":[[0,1],[1,0]],"threePoint":{"0,0,1":"1","1,1,1":"1"},"unit":0}"#,
        )
        .unwrap();
        let f = FrobeniusData::from_json(&v).unwrap();
        assert_eq!(f.basis_product(1, 1), &[q(1, 1), q(0, 1)]);
        let bad: Value =
            serde_json::from_str(r#"{"dim":1,"eta":[[1]],"threePoint":{"0,0,0":"2"},"unit":0}"#).unwrap();
        assert!(matches!(FrobeniusData::from_json(&bad), Err(Error::InvalidTheory(_))));
    }
}
