//! Exact coefficient rings: rationals, truncated power series, bivariate
//! series, multivariate polynomials in `t1, t2, q` and their fraction field.
//!
//! Every type here is immutable from the outside, keeps a canonical form
//! (so `==` is structural), and never touches floating point.

mod bivariate;
mod matrix;
mod mpoly;
mod rational;
mod ratfunc;
mod series;

pub use bivariate::{series_divide_bivariate, BiSeries};
pub use matrix::Matrix;
pub use mpoly::{MPoly, Monomial, POLY_VARS};
pub use rational::{bernoulli_numbers, Rational};
pub use ratfunc::RationalFunction;
pub use series::{TruncSeries, Var};

use std::fmt::Debug;

/// A commutative ring with unit and an embedding of the rationals.
///
/// The engine is generic over this trait so that the same graph sum runs
/// over `Q`, over `Q[t]/(t^{N+1})` and over rational functions.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;

    /// Multiplicative inverse, when it exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    fn scaled(&self, r: &Rational) -> Self {
        self.times(&Self::from_rational(r))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.plus(rhs);
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        self.recip().ok()
    }
    fn scaled(&self, r: &Rational) -> Self {
        self * r
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
}
