use std::fmt;

use super::Ring;
use crate::error::{Error, Result};

/// Truncated power series in two variables `z, w`, total degree `<= order`.
///
/// Stored as `rows[i][j]` = coefficient of `z^i w^j` with `i + j <= order`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries<C: Ring> {
    order: usize,
    rows: Vec<Vec<C>>,
}

impl<C: Ring> BiSeries<C> {
    pub fn zero(order: usize) -> Self {
        let rows = (0..=order).map(|i| vec![C::zero(); order - i + 1]).collect();
        BiSeries { order, rows }
    }

    /// Build from a coefficient function `(i, j) -> c_{ij}`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let rows = (0..=order)
            .map(|i| (0..=order - i).map(|j| f(i, j)).collect())
            .collect();
        BiSeries { order, rows }
    }

    /// Product `a(z) b(w)` of two univariate coefficient lists.
    pub fn outer(order: usize, a: &[C], b: &[C]) -> Self {
        Self::from_fn(order, |i, j| match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.times(y),
            _ => C::zero(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize, j: usize) -> C {
        assert!(i + j <= self.order, "coefficient ({i},{j}) beyond order {}", self.order);
        self.rows[i][j].clone()
    }

    pub fn coeff_ref(&self, i: usize, j: usize) -> &C {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: C) {
        assert!(i + j <= self.order, "coefficient ({i},{j}) beyond order {}", self.order);
        self.rows[i][j] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|c| c.is_zero())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if self.order != rhs.order {
            return Err(Error::OrderMismatch { left: self.order, right: rhs.order });
        }
        Ok(Self::from_fn(self.order, |i, j| self.rows[i][j].plus(&rhs.rows[i][j])))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        if self.order != rhs.order {
            return Err(Error::OrderMismatch { left: self.order, right: rhs.order });
        }
        Ok(Self::from_fn(self.order, |i, j| self.rows[i][j].minus(&rhs.rows[i][j])))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.order != rhs.order {
            return Err(Error::OrderMismatch { left: self.order, right: rhs.order });
        }
        let n = self.order;
        let mut out = Self::zero(n);
        for i in 0..=n {
            for j in 0..=n - i {
                let a = &self.rows[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..=n - i - j {
                    for l in 0..=n - i - j - k {
                        let b = &rhs.rows[k][l];
                        if !b.is_zero() {
                            out.rows[i + k][j + l].add_assign_ref(&a.times(b));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exchange the roles of `z` and `w`.
    pub fn swapped(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.rows[j][i].clone())
    }
}

impl<C: Ring> fmt::Debug for BiSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c:?})z^{i}w^{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({})", self.order + 1)
    }
}

/// Divide `num` by `z + w`.
///
/// The quotient is known through total degree `order - 1`. Fails with
/// [`Error::NonDivisible`] when `num` does not vanish on `w = -z`, i.e. when
/// some homogeneous part has nonzero alternating coefficient sum.
pub fn series_divide_bivariate<C: Ring>(num: &BiSeries<C>) -> Result<BiSeries<C>> {
    let n = num.order();
    if !num.coeff_ref(0, 0).is_zero() {
        return Err(Error::NonDivisible { degree: 0 });
    }
    if n == 0 {
        return Err(Error::Range("cannot divide an order-0 series by z+w".into()));
    }
    let mut q = BiSeries::zero(n - 1);
    for s in 1..=n {
        // num[a][b] = q[a-1][b] + q[a][b-1] on the degree-s diagonal
        let mut prev = num.coeff(s, 0);
        q.set(s - 1, 0, prev.clone());
        for b in 1..s {
            let next = num.coeff_ref(s - b, b).minus(&prev);
            q.set(s - 1 - b, b, next.clone());
            prev = next;
        }
        if *num.coeff_ref(0, s) != prev {
            return Err(Error::NonDivisible { degree: s });
        }
    }
    Ok(q)
}
