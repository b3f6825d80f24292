use std::fmt;

use serde_json::{json, Value};

use super::{MPoly, Rational, Ring, TruncSeries, Var};
use crate::error::{Error, Result};

/// Quotient of two [`MPoly`]s in lowest terms, with the denominator's
/// leading coefficient normalized to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MPoly,
    den: MPoly,
}

impl RationalFunction {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    /// Skip the gcd when the caller knows `num` and `den` are coprime.
    pub(crate) fn from_coprime(num: MPoly, den: MPoly) -> Self {
        let lc = den.leading().expect("nonzero denominator").1.clone();
        let inv = lc.recip().expect("nonzero");
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    fn reduced(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return RationalFunction { num, den: MPoly::one() };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if !lc.is_one() {
            let inv = lc.recip().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: MPoly) -> Self {
        RationalFunction { num: p, den: MPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::reduced(self.num.add(&rhs.num), self.den.clone());
        }
        Self::reduced(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Self::zero();
        }
        Self::reduced(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Value at a point `(t1, t2, q)`; fails where the denominator vanishes.
    pub fn eval(&self, point: &[Rational; 3]) -> Result<Rational> {
        self.num.eval(point).checked_div(&self.den.eval(point))
    }

    /// Cross-multiplication equality test, independent of normal form.
    pub fn equals_by_cross_mul(&self, rhs: &Self) -> bool {
        self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }

    /// Taylor expansion in `q` through `q^order`, coefficients in
    /// `Q(t1, t2)`. Fails if the function has a pole at `q = 0`.
    pub fn q_expansion(&self, order: usize) -> Result<TruncSeries<RationalFunction>> {
        const Q: usize = 2;
        let split = |p: &MPoly| {
            let mut out = vec![MPoly::zero(); order + 1];
            for (m, c) in p.terms() {
                let k = m.0[Q] as usize;
                if k <= order {
                    let mut rest = *m;
                    rest.0[Q] = 0;
                    out[k] = out[k].add(&MPoly::term(c.clone(), rest));
                }
            }
            out
        };
        let n = split(&self.num);
        let d = split(&self.den);
        if d[0].is_zero() {
            return Err(Error::Range("pole at q = 0".into()));
        }
        let d0 = RationalFunction::from_poly(d[0].clone());
        let mut f: Vec<RationalFunction> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = RationalFunction::from_poly(n[k].clone());
            for j in 1..=k {
                if !d[j].is_zero() {
                    acc = acc.sub(&RationalFunction::from_poly(d[j].clone()).mul(&f[k - j]));
                }
            }
            f.push(acc.div(&d0)?);
        }
        Ok(TruncSeries::truncated(Var::Q, order, f))
    }

    pub fn to_json(&self) -> Value {
        json!({ "num": self.num.to_json(), "den": self.den.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("rational function missing {k:?}")))
                .and_then(MPoly::from_json)
        };
        Self::new(get("num")?, get("den")?)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == MPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Ring for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(MPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        self.recip().ok()
    }
    fn scaled(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(r), den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> MPoly {
        MPoly::constant(Rational::from(n))
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let q = MPoly::q();
        let f = RationalFunction::new(q.pow(2).sub(&c(1)), q.sub(&c(1))).unwrap();
        assert_eq!(f, RationalFunction::from_poly(q.add(&c(1))));
        let g = RationalFunction::new(c(2), q.scale(&Rational::from(4))).unwrap();
        assert_eq!(g.to_string(), "(1/2)/(q)");
        assert!(RationalFunction::new(c(1), MPoly::zero()).is_err());
    }

    #[test]
    fn q_expansion_of_geometric_series() {
        let q = MPoly::q();
        let f = RationalFunction::new(c(1), c(1).sub(&q)).unwrap();
        let s = f.q_expansion(4).unwrap();
        for k in 0..=4 {
            assert_eq!(s.coeff(k), RationalFunction::one());
        }
        let pole = RationalFunction::new(c(1), q).unwrap();
        assert!(pole.q_expansion(2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = RationalFunction::new(MPoly::t1().add(&MPoly::t2()), MPoly::t1().mul(&MPoly::t2()).scale(&Rational::from(-2)))
            .unwrap();
        let v = f.to_json();
        assert_eq!(RationalFunction::from_json(&v).unwrap(), f);
    }
}
