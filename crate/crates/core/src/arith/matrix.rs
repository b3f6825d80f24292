use std::fmt;

use super::{Rational, Ring};
use crate::error::{Error, Result};

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<C: Ring = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Ring> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: C) {
        self.data[i * self.cols + j] = c;
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &C> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn map<D: Ring>(&self, f: impl FnMut(&C) -> D) -> Matrix<D> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn same_shape(&self, rhs: &Self) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Range(format!(
                "matrix shapes {}x{} and {}x{} differ",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.plus(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.minus(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Range(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j].add_assign_ref(&a.times(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|a| a.times(c))
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::negated)
    }

    pub fn mul_vec(&self, v: &[C]) -> Result<Vec<C>> {
        if v.len() != self.cols {
            return Err(Error::Range(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = C::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign_ref(&a.times(b));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Gauss-Jordan inverse; pivots must be units of the ring.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SingularPairing);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let (pivot, p_inv) = (col..n)
                .find_map(|r| a.get(r, col).try_inv().map(|x| (r, x)))
                .ok_or(Error::SingularPairing)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            a.scale_row(col, &p_inv);
            inv.scale_row(col, &p_inv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                a.axpy_row(r, col, &f);
                inv.axpy_row(r, col, &f);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, f: &C) {
        for c in 0..self.cols {
            let x = self.data[i * self.cols + c].times(f);
            self.data[i * self.cols + c] = x;
        }
    }

    /// row_r -= f * row_src
    fn axpy_row(&mut self, r: usize, src: usize, f: &C) {
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c];
            if s.is_zero() {
                continue;
            }
            let x = self.data[r * self.cols + c].minus(&f.times(s));
            self.data[r * self.cols + c] = x;
        }
    }
}

impl<C: Ring> fmt::Debug for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}
