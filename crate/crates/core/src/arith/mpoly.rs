use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;

use super::{Rational, Ring};
use crate::error::{Error, Result};

/// Variable names of [`MPoly`], in exponent-vector order.
pub const POLY_VARS: [&str; 3] = ["t1", "t2", "q"];
const NVARS: usize = POLY_VARS.len();

/// Exponent vector over `t1, t2, q`, ordered lexicographically with `t1`
/// most significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(self, rhs: Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(rhs.0) {
            *a += b;
        }
        Monomial(e)
    }

    fn div(self, rhs: Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(rhs.0) {
            *a = a.checked_sub(b)?;
        }
        Some(Monomial(e))
    }

    fn parse(s: &str) -> Result<Monomial> {
        let s = s.trim();
        let mut e = [0; NVARS];
        if s == "1" || s.is_empty() {
            return Ok(Monomial(e));
        }
        for factor in s.split(|c: char| c.is_whitespace() || c == '*').filter(|f| !f.is_empty()) {
            let (name, pow) = match factor.split_once('^') {
                Some((n, p)) => (n, p.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?),
                None => (factor, 1),
            };
            let i = POLY_VARS
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            e[i] += pow;
        }
        Ok(Monomial(e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(POLY_VARS)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Sparse polynomial in `t1, t2, q` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    /// The `i`-th variable of [`POLY_VARS`].
    pub fn var(i: usize) -> Self {
        Self::term(Rational::one(), Monomial::var(i))
    }

    pub fn t1() -> Self {
        Self::var(0)
    }

    pub fn t2() -> Self {
        Self::var(1)
    }

    pub fn q() -> Self {
        Self::var(2)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::ONE).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(Monomial, &Rational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }

    pub fn mul(&self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), &(ca * cb));
            }
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    fn mul_term(&self, m: Monomial, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Rational; NVARS]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.clone();
                for (x, e) in point.iter().zip(m.0) {
                    if e > 0 {
                        v *= &x.pow(e);
                    }
                }
                v
            })
            .sum()
    }

    /// Substitute polynomials for every variable.
    pub fn compose(&self, images: &[MPoly; NVARS]) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for (img, e) in images.iter().zip(m.0) {
                if e > 0 {
                    t = t.mul(&img.pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.recip().ok()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = c * &lc_inv;
            rem = rem.sub(&d.mul_term(qm, &qc));
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip().expect("nonzero leading coefficient")),
            None => MPoly::zero(),
        }
    }

    /// Coefficients as a polynomial in `var`, lowest degree first.
    fn to_univariate(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![MPoly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let mut rest = *m;
            let k = rest.0[var] as usize;
            rest.0[var] = 0;
            out[k].add_term(rest, c);
        }
        out
    }

    fn from_univariate(coeffs: &[MPoly], var: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out = out.add(&c.mul_term(Monomial::var(var).pow(k as u32), &Rational::one()));
        }
        out
    }

    fn main_var(&self) -> Option<usize> {
        (0..NVARS).rev().find(|&v| self.degree_in(v).unwrap_or(0) > 0)
    }

    fn content_in(&self, var: usize) -> MPoly {
        self.to_univariate(var)
            .iter()
            .fold(MPoly::zero(), |g, c| if c.is_zero() { g } else { g.gcd(c) })
    }

    /// Greatest common divisor, normalized to leading coefficient 1
    /// (zero only when both inputs are zero).
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let var = match (self.main_var(), other.main_var()) {
            (None, _) | (_, None) => return MPoly::one(),
            (Some(a), Some(b)) => a.max(b),
        };
        let da = self.degree_in(var).unwrap_or(0);
        let db = other.degree_in(var).unwrap_or(0);
        if da == 0 {
            return self.gcd(&other.content_in(var));
        }
        if db == 0 {
            return other.gcd(&self.content_in(var));
        }
        let ca = self.content_in(var);
        let cb = other.content_in(var);
        let content = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).expect("content divides").integer_primitive();
        let mut b = other.div_exact(&cb).expect("content divides").integer_primitive();
        if da < db {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b, var);
            if r.is_zero() {
                break;
            }
            if r.degree_in(var).unwrap_or(0) == 0 {
                return content.monic();
            }
            let cr = r.content_in(var);
            a = b;
            b = r.div_exact(&cr).expect("content divides").integer_primitive();
        }
        let cb = b.content_in(var);
        let prim = b.div_exact(&cb).expect("content divides");
        content.mul(&prim).monic()
    }

    /// Scaled to coprime integer coefficients.
    fn integer_primitive(&self) -> MPoly {
        let mut it = self.terms.values();
        let Some(first) = it.next() else {
            return self.clone();
        };
        let g = it.fold(first.clone(), |g, c| g.gcd(c));
        self.scale(&g.recip().expect("nonzero content"))
    }

    /// A nonzero rational multiple of `lc(b)^e * self - Q * b` with degree in `var` below that of `b`.
    fn pseudo_rem(&self, b: &MPoly, var: usize) -> MPoly {
        let bu = b.to_univariate(var);
        let db = bu.len() - 1;
        let lcb = &bu[db];
        let mut r = self.clone();
        loop {
            let ru = r.to_univariate(var);
            let dr = ru.len() - 1;
            if r.is_zero() || dr < db {
                return r;
            }
            let lcr = &ru[dr];
            let shift: Vec<MPoly> = (0..=dr - db)
                .map(|k| if k == dr - db { lcr.clone() } else { MPoly::zero() })
                .collect();
            let shift = MPoly::from_univariate(&shift, var);
            r = r.mul(lcb).sub(&shift.mul(b)).integer_primitive();
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Object(
            self.terms
                .iter()
                .map(|(m, c)| (m.to_string(), Value::String(c.to_string())))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<MPoly> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("polynomial must be a JSON object".into()))?;
        let mut p = MPoly::zero();
        for (k, c) in obj {
            let c: Rational = c
                .as_str()
                .ok_or_else(|| Error::Parse("coefficient must be a string".into()))?
                .parse()?;
            p.add_term(Monomial::parse(k)?, &c);
        }
        Ok(p)
    }
}

impl Monomial {
    fn pow(self, e: u32) -> Monomial {
        Monomial(self.0.map(|x| x * e))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (sign, abs) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (*m == Monomial::ONE, abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{}", m.to_string().replace(' ', "*"))?,
                (false, false) => write!(f, "{abs}*{}", m.to_string().replace(' ', "*"))?,
            }
        }
        Ok(())
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
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
        MPoly::constant(r.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_constant() && !self.is_zero() {
            self.constant_term().recip().ok().map(MPoly::constant)
        } else {
            None
        }
    }
    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }
}
