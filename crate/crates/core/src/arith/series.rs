use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;

use super::{Rational, Ring};
use crate::error::{Error, Result};

/// Tag naming the formal variable of a series.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub char);

impl Var {
    pub const Z: Var = Var('z');
    pub const W: Var = Var('w');
    pub const T: Var = Var('t');
    pub const Q: Var = Var('q');
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense univariate power series, either truncated at `O(x^{N+1})` or exact
/// (a polynomial, `order == None`).
///
/// Coefficients above the truncation order are never stored or read.
/// Combining two truncated series of different orders is an error rather
/// than a silent minimum; exact operands adopt the other side's order.
#[derive(Clone)]
pub struct TruncSeries<C: Ring = Rational> {
    var: Option<Var>,
    order: Option<usize>,
    coeffs: Vec<C>,
}

impl<C: Ring> TruncSeries<C> {
    pub fn new(var: Var, order: Option<usize>, mut coeffs: Vec<C>) -> Self {
        if let Some(n) = order {
            coeffs.truncate(n + 1);
        }
        Self::canonical(Some(var), order, coeffs)
    }

    /// A truncated series `sum_k coeffs[k] x^k + O(x^{order+1})`.
    pub fn truncated(var: Var, order: usize, coeffs: Vec<C>) -> Self {
        Self::new(var, Some(order), coeffs)
    }

    /// An exact polynomial.
    pub fn polynomial(var: Var, coeffs: Vec<C>) -> Self {
        Self::new(var, None, coeffs)
    }

    pub fn constant(c: C) -> Self {
        Self::canonical(None, None, vec![c])
    }

    /// The variable itself, truncated at `order`.
    pub fn variable(var: Var, order: usize) -> Self {
        Self::truncated(var, order, vec![C::zero(), C::one()])
    }

    fn canonical(var: Option<Var>, order: Option<usize>, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let var = if order.is_none() && coeffs.len() <= 1 { None } else { var };
        TruncSeries { var, order, coeffs }
    }

    pub fn var(&self) -> Option<Var> {
        self.var
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    /// Coefficient of `x^k`; zero beyond the stored support.
    ///
    /// Panics if `k` exceeds the truncation order, since that coefficient
    /// is unknown rather than zero.
    pub fn coeff(&self, k: usize) -> C {
        if let Some(n) = self.order {
            assert!(k <= n, "coefficient {k} requested beyond truncation order {n}");
        }
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Highest index with a stored nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    fn combine_meta(&self, rhs: &Self) -> Result<(Option<Var>, Option<usize>)> {
        let var = match (self.var, rhs.var) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::VariableMismatch { left: a.0, right: b.0 })
            }
            (a, b) => a.or(b),
        };
        let order = match (self.order, rhs.order) {
            (Some(a), Some(b)) if a != b => return Err(Error::OrderMismatch { left: a, right: b }),
            (a, b) => a.or(b),
        };
        Ok((var, order))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        let (var, order) = self.combine_meta(rhs)?;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => C::zero(),
            })
            .collect();
        Ok(Self::finish(var, order, coeffs))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        let (var, order) = self.combine_meta(rhs)?;
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Ok(Self::finish(var, order, Vec::new()));
        }
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(n) = order {
            len = len.min(n + 1);
        }
        let mut out = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j].add_assign_ref(&a.times(b));
            }
        }
        Ok(Self::finish(var, order, out))
    }

    fn finish(var: Option<Var>, order: Option<usize>, coeffs: Vec<C>) -> Self {
        let mut s = Self::canonical(var, order, coeffs);
        if s.var.is_none() && s.order.is_some() {
            // truncated constant: keep a placeholder variable so that the
            // order survives printing and comparison
            s.var = Some(Var::T);
        }
        s
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            var: self.var,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.negated()).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::canonical(self.var, self.order, self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    /// `f(c x)`.
    pub fn rescale_var(&self, c: &C) -> Self {
        let mut pow = C::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.times(&pow));
            pow = pow.times(c);
        }
        Self::canonical(self.var, self.order, coeffs)
    }

    /// Same coefficients, truncated at `order` (which must not exceed the
    /// current order).
    pub fn truncate_to(&self, order: usize) -> Result<Self> {
        if let Some(n) = self.order {
            if order > n {
                return Err(Error::OrderMismatch { left: n, right: order });
            }
        }
        let var = self.var.unwrap_or(Var::T);
        Ok(Self::truncated(var, order, self.coeffs.clone()))
    }

    /// Even-power and odd-power parts.
    pub fn split_parity(&self) -> (Self, Self) {
        let pick = |parity: usize| {
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == parity { c.clone() } else { C::zero() })
                .collect::<Vec<_>>()
        };
        (
            Self::canonical(self.var, self.order, pick(0)),
            Self::canonical(self.var, self.order, pick(1)),
        )
    }

    /// `exp(f)` for a truncated series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        let n = self
            .order
            .ok_or_else(|| Error::Range("exp needs a truncated series".into()))?;
        if !self.coeff(0).is_zero() {
            return Err(Error::Range("exp needs a zero constant term".into()));
        }
        // E' = f' E  =>  k E_k = sum_{j=1}^{k} j f_j E_{k-j}
        let mut e = vec![C::zero(); n + 1];
        e[0] = C::one();
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                let fj = self.coeff(j);
                if fj.is_zero() {
                    continue;
                }
                acc.add_assign_ref(&fj.times(&e[k - j]).scaled(&Rational::from(j)));
            }
            e[k] = acc.scaled(&Rational::frac(1, k as i64));
        }
        Ok(Self::finish(self.var, self.order, e))
    }

    /// Multiplicative inverse of a truncated series with invertible constant
    /// term, or of an exact nonzero constant.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs.first()?;
        let c0_inv = c0.try_inv()?;
        match self.order {
            None => (self.coeffs.len() == 1).then(|| Self::constant(c0_inv)),
            Some(n) => {
                let mut inv = vec![C::zero(); n + 1];
                inv[0] = c0_inv.clone();
                for k in 1..=n {
                    let mut acc = C::zero();
                    for j in 1..=k {
                        if let Some(a) = self.coeffs.get(j) {
                            acc.add_assign_ref(&a.times(&inv[k - j]));
                        }
                    }
                    inv[k] = acc.times(&c0_inv).negated();
                }
                Some(Self::finish(self.var, self.order, inv))
            }
        }
    }
}

impl TruncSeries<Rational> {
    /// JSON map `{exponent: "p/q"}` over the nonzero coefficients.
    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k.to_string(), Value::String(c.to_string())))
            .collect();
        Value::Object(map)
    }

    pub fn from_json(var: Var, order: Option<usize>, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("series must be a JSON object".into()))?;
        let mut terms = BTreeMap::new();
        for (k, c) in obj {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {k:?}")))?;
            let c = c
                .as_str()
                .ok_or_else(|| Error::Parse("coefficient must be a string".into()))?
                .parse::<Rational>()?;
            terms.insert(k, c);
        }
        let len = terms.keys().next_back().map_or(0, |k| k + 1);
        let mut coeffs = vec![Rational::zero(); len];
        for (k, c) in terms {
            coeffs[k] = c;
        }
        Ok(Self::new(var, order, coeffs))
    }
}

/// Equal coefficients compare equal unless both sides are truncated at
/// different orders or carry different variables.
impl<C: Ring> PartialEq for TruncSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        if let (Some(a), Some(b)) = (self.order, other.order) {
            if a != b {
                return false;
            }
        }
        if let (Some(a), Some(b)) = (self.var, other.var) {
            if a != b && self.coeffs.len() > 1 {
                return false;
            }
        }
        self.coeffs == other.coeffs
    }
}

impl<C: Ring + Eq> Eq for TruncSeries<C> {}

impl<C: Ring> fmt::Debug for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.var.map_or('x', |v| v.0);
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c:?}")?,
                1 => write!(f, "({c:?}){x}")?,
                _ => write!(f, "({c:?}){x}^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(n) = self.order {
            write!(f, " + O({x}^{})", n + 1)?;
        }
        Ok(())
    }
}

impl<C: Ring> Ring for TruncSeries<C> {
    fn zero() -> Self {
        Self::constant(C::zero())
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("series arithmetic")
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.try_add(&rhs.neg()).expect("series arithmetic")
    }
    fn times(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("series arithmetic")
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(C::from_rational(r))
    }
    fn try_inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn scaled(&self, r: &Rational) -> Self {
        Self::canonical(self.var, self.order, self.coeffs.iter().map(|a| a.scaled(r)).collect())
    }
}
