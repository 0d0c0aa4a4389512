//! Sparse polynomials in X with fractional powers of Y.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::coeff::Coeff;
use super::puiseux::{min_trunc, PuiseuxSeries};
use crate::error::{Error, Result};
use crate::rat::{binomial, fmt_rat, Rat};

/// Monomials keyed by `(x-degree, y-exponent)`. `y_trunc`, when present, marks
/// the y-exponent from which coefficients are no longer known.
#[derive(Clone, Debug)]
pub struct BivarPoly<C: Coeff> {
    terms: BTreeMap<(u32, Rat), C>,
    y_trunc: Option<Rat>,
}

impl<C: Coeff + PartialEq> PartialEq for BivarPoly<C> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && self.y_trunc == o.y_trunc
    }
}

impl<C: Coeff> Default for BivarPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> BivarPoly<C> {
    pub fn zero() -> Self {
        BivarPoly { terms: BTreeMap::new(), y_trunc: None }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, Rat), C)>, y_trunc: Option<Rat>) -> Self {
        let mut p = BivarPoly { terms: BTreeMap::new(), y_trunc };
        for (k, c) in terms {
            p.add_term(k.0, k.1, c);
        }
        p
    }

    pub fn monomial(i: u32, q: Rat, c: C) -> Self {
        Self::from_terms([((i, q), c)], None)
    }

    pub fn add_term(&mut self, i: u32, q: Rat, c: C) {
        if self.y_trunc.as_ref().is_some_and(|t| &q >= t) {
            return;
        }
        let key = (i, q);
        let v = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_structural_zero() {
            self.terms.insert(key, v);
        }
    }

    /// Replaces a coefficient outright; a structural zero removes the monomial.
    pub fn set_term(&mut self, i: u32, q: Rat, c: C) {
        let key = (i, q);
        if c.is_structural_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, c);
        }
    }

    pub fn remove_term(&mut self, i: u32, q: &Rat) {
        self.terms.remove(&(i, q.clone()));
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, Rat), &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn y_trunc(&self) -> Option<&Rat> {
        self.y_trunc.as_ref()
    }

    pub fn with_y_trunc(mut self, t: Option<Rat>) -> Self {
        if let Some(t) = &t {
            self.terms.retain(|(_, q), _| q < t);
        }
        self.y_trunc = min_trunc(&self.y_trunc, &t);
        self
    }

    pub fn get(&self, i: u32, q: &Rat) -> Option<&C> {
        self.terms.get(&(i, q.clone()))
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    pub fn max_y(&self) -> Option<Rat> {
        self.terms.keys().map(|(_, q)| q.clone()).max()
    }

    pub fn dots(&self) -> Vec<(u32, Rat)> {
        self.terms.keys().cloned().collect()
    }

    /// Least common denominator of the y-exponents.
    pub fn y_denom(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.keys().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()))
    }

    /// Coefficient of `X^i` as a series in Y.
    pub fn column(&self, i: u32) -> PuiseuxSeries<C> {
        PuiseuxSeries::from_terms(
            self.terms.range((i, Rat::zero())..(i + 1, Rat::zero())).map(|((_, q), c)| (q.clone(), c.clone())),
            self.y_trunc.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        BivarPoly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
            y_trunc: self.y_trunc.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = Self::from_terms(
            self.terms.iter().map(|(k, c)| (k.clone(), c.clone())),
            min_trunc(&self.y_trunc, &o.y_trunc),
        );
        for ((i, q), c) in &o.terms {
            p.add_term(*i, q.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), c.mul(a))), self.y_trunc.clone())
    }

    fn min_y(&self) -> Option<Rat> {
        self.terms.keys().map(|(_, q)| q.clone()).min()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut trunc = None;
        if let (Some(t), Some(m)) = (&self.y_trunc, o.min_y().or_else(|| o.y_trunc.clone())) {
            trunc = min_trunc(&trunc, &Some(t + m));
        }
        if let (Some(t), Some(m)) = (&o.y_trunc, self.min_y().or_else(|| self.y_trunc.clone())) {
            trunc = min_trunc(&trunc, &Some(t + m));
        }
        let mut p = BivarPoly { terms: BTreeMap::new(), y_trunc: trunc };
        for ((i1, q1), c1) in &self.terms {
            for ((i2, q2), c2) in &o.terms {
                p.add_term(i1 + i2, q1 + q2, c1.mul(c2));
            }
        }
        p
    }

    pub fn pow(&self, n: u32, ctx: &C::Ctx) -> Self {
        let mut acc = Self::monomial(0, Rat::zero(), C::one_in(ctx));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, q), c)| ((i - 1, q.clone()), c.mul_rat(&Rat::from_integer((*i).into())))),
            self.y_trunc.clone(),
        )
    }

    /// Derivative in Y; exponent-0 terms vanish.
    pub fn derivative_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, q), _)| !q.is_zero())
                .map(|((i, q), c)| ((*i, q - Rat::one()), c.mul_rat(q))),
            self.y_trunc.as_ref().map(|t| t - Rat::one()),
        )
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BivarPoly<D> {
        BivarPoly::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), f(c))), self.y_trunc.clone())
    }

    pub fn try_map<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<BivarPoly<D>> {
        let mut v = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            v.push((k.clone(), f(c)?));
        }
        Ok(BivarPoly::from_terms(v, self.y_trunc.clone()))
    }

    /// `y -> -y`; requires integer y-exponents.
    pub fn negate_y(&self) -> Result<Self> {
        let mut v = Vec::with_capacity(self.terms.len());
        for ((i, q), c) in &self.terms {
            if !q.is_integer() {
                return Err(Error::Precondition("y -> -y needs integer y-exponents".into()));
            }
            let odd = (q.to_integer() % BigInt::from(2)) != BigInt::zero();
            v.push(((*i, q.clone()), if odd { c.neg() } else { c.clone() }));
        }
        Ok(BivarPoly::from_terms(v, self.y_trunc.clone()))
    }

    /// `F(X + λ(Y), Y)`, optionally discarding y-exponents from `cap` on.
    ///
    /// The truncation of `λ` propagates to the result's `y_trunc`.
    pub fn substitute_arc(&self, lambda: &PuiseuxSeries<C>, cap: Option<&Rat>, ctx: &C::Ctx) -> Result<Self> {
        if !lambda.is_arc() {
            return Err(Error::Precondition("arc exponents must be >= 1".into()));
        }
        let deg = self.x_degree().unwrap_or(0) as usize;
        let mut powers: Vec<PuiseuxSeries<C>> = Vec::with_capacity(deg + 1);
        powers.push(PuiseuxSeries::monomial(Rat::zero(), C::one_in(ctx)));
        for p in 1..=deg {
            let next = match cap {
                Some(c) => powers[p - 1].mul_capped(lambda, c),
                None => powers[p - 1].mul(lambda),
            };
            powers.push(next);
        }
        let mut trunc = self.y_trunc.clone();
        if let Some(c) = cap {
            trunc = min_trunc(&trunc, &Some(c.clone()));
        }
        for ((i, q), _) in &self.terms {
            for p in 1..=*i as usize {
                if let Some(t) = powers[p].trunc() {
                    if cap.is_none_or(|c| t < c) {
                        trunc = min_trunc(&trunc, &Some(t + q));
                    }
                }
            }
        }
        let mut out = BivarPoly { terms: BTreeMap::new(), y_trunc: trunc };
        for ((i, q), a) in &self.terms {
            let i = *i as usize;
            for k in 0..=i {
                let b = Rat::from_integer(binomial(i, k));
                let ab = a.mul_rat(&b);
                for (e, c) in powers[i - k].terms() {
                    out.add_term(k as u32, q + e, ab.mul(c));
                }
            }
        }
        Ok(out)
    }

    /// Lowest y-exponent among monomials of x-degree `i`, if any.
    pub fn column_order(&self, i: u32) -> Option<Rat> {
        self.terms.range((i, Rat::zero())..(i + 1, Rat::zero())).next().map(|((_, q), _)| q.clone())
    }

    pub fn render_with(&self, coeff: impl Fn(&C) -> Option<String>) -> String {
        render_terms(self.terms.iter().rev().map(|((i, q), c)| (*i, q.clone(), coeff(c))))
    }
}

/// Renders monomials in the expression grammar. `None` as a coefficient
/// string stands for a coefficient equal to one.
pub fn render_terms(terms: impl Iterator<Item = (u32, Rat, Option<String>)>) -> String {
    let mut out = String::new();
    for (i, q, c) in terms {
        let mut factors: Vec<String> = Vec::new();
        let mut negative = false;
        if let Some(c) = c {
            if let Some(stripped) = c.strip_prefix('-') {
                negative = true;
                if stripped != "1" || (i == 0 && q.is_zero()) {
                    factors.push(stripped.to_string());
                }
            } else if c != "1" || (i == 0 && q.is_zero()) {
                factors.push(c);
            }
        } else if i == 0 && q.is_zero() {
            factors.push("1".into());
        }
        match i {
            0 => {}
            1 => factors.push("x".into()),
            _ => factors.push(format!("x^{i}")),
        }
        if !q.is_zero() {
            if q.is_one() {
                factors.push("y".into());
            } else {
                factors.push(format!("y^{}", fmt_rat(&q)));
            }
        }
        let body = factors.join("*");
        if out.is_empty() {
            if negative {
                out.push('-');
            }
            out.push_str(&body);
        } else {
            out.push_str(if negative { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl BivarPoly<Rat> {
    pub fn eval(&self, x: &Rat, y: &Rat) -> Result<Rat> {
        let mut acc = Rat::zero();
        for ((i, q), c) in &self.terms {
            if !q.is_integer() {
                return Err(Error::Precondition("rational evaluation needs integer exponents".into()));
            }
            let qe = q.to_integer();
            let qe = i32::try_from(&qe).map_err(|_| Error::Precondition("exponent too large".into()))?;
            acc += c * x.pow(*i as i32) * y.pow(qe);
        }
        Ok(acc)
    }

    /// Evaluate in floating point; `y` must be positive when exponents are fractional.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|((i, q), c)| {
                let yq = if q.is_integer() {
                    y.powi(crate::rat::to_f64(q) as i32)
                } else {
                    y.powf(crate::rat::to_f64(q))
                };
                crate::rat::to_f64(c) * x.powi(*i as i32) * yq
            })
            .sum()
    }

    pub fn render(&self) -> String {
        self.render_with(|c| Some(fmt_rat(c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn x2_minus_y3() -> BivarPoly<Rat> {
        BivarPoly::from_terms([((2, int(0)), int(1)), ((0, int(3)), int(-1))], None)
    }

    #[test]
    fn identity_substitution() {
        let f = x2_minus_y3();
        let g = f.substitute_arc(&PuiseuxSeries::zero(), None, &()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn substitute_root_arc() {
        let f = x2_minus_y3();
        let lam = PuiseuxSeries::monomial(rat(3, 2), int(1));
        let g = f.substitute_arc(&lam, None, &()).unwrap();
        let want = BivarPoly::from_terms([((2, int(0)), int(1)), ((1, rat(3, 2)), int(2))], None);
        assert_eq!(g, want);
    }

    #[test]
    fn render_canonical() {
        let f = x2_minus_y3();
        assert_eq!(f.render(), "x^2 - y^3");
        let g = BivarPoly::from_terms([((1, int(1)), rat(-1, 2)), ((0, int(0)), int(-1))], None);
        assert_eq!(g.render(), "-1/2*x*y - 1");
    }
}
