//! Finite fractional power series in y, possibly known only below a
//! truncation exponent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::coeff::Coeff;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Least y-exponent, or infinity for a series that vanishes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(Rat),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Order::Finite(r) => Some(r),
            Order::Infinite => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Order::Finite(r) => crate::rat::fmt_rat(r),
            Order::Infinite => "inf".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PuiseuxSeries<C: Coeff> {
    terms: BTreeMap<Rat, C>,
    trunc: Option<Rat>,
}

impl<C: Coeff> PartialEq for PuiseuxSeries<C>
where
    C: PartialEq,
{
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && self.trunc == o.trunc
    }
}

impl<C: Coeff> Default for PuiseuxSeries<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> PuiseuxSeries<C> {
    pub fn zero() -> Self {
        PuiseuxSeries { terms: BTreeMap::new(), trunc: None }
    }

    /// Builds from terms; structural zeros and terms at or beyond `trunc` are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rat, C)>, trunc: Option<Rat>) -> Self {
        let mut s = Self::zero();
        s.trunc = trunc;
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn monomial(e: Rat, c: C) -> Self {
        Self::from_terms([(e, c)], None)
    }

    pub fn add_term(&mut self, e: Rat, c: C) {
        if self.trunc.as_ref().is_some_and(|t| &e >= t) {
            return;
        }
        let v = match self.terms.remove(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_structural_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn trunc(&self) -> Option<&Rat> {
        self.trunc.as_ref()
    }

    pub fn coeff(&self, e: &Rat) -> Option<&C> {
        self.terms.get(e)
    }

    /// Drops every term of exponent `>= at` and records the truncation.
    pub fn truncate(&self, at: &Rat) -> Self {
        let trunc = match &self.trunc {
            Some(t) if t < at => t.clone(),
            _ => at.clone(),
        };
        Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.clone())), Some(trunc))
    }

    /// Terms strictly below `h`, as an exactly known finite series.
    pub fn prefix_below(&self, h: &Rat) -> Self {
        Self::from_terms(self.terms.range(..h.clone()).map(|(e, c)| (e.clone(), c.clone())), None)
    }

    pub fn with_trunc(mut self, trunc: Option<Rat>) -> Self {
        if let Some(t) = &trunc {
            self.terms.retain(|e, _| e < t);
        }
        self.trunc = trunc;
        self
    }

    /// Least common denominator of the exponents.
    pub fn denom(&self) -> BigInt {
        self.terms.keys().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }

    pub fn max_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next_back()
    }

    pub fn min_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    /// Least exponent with a coefficient that is certainly nonzero. Coefficients
    /// that cannot be decided raise an error rather than being skipped.
    pub fn order_y(&self) -> Result<Order> {
        for (e, c) in &self.terms {
            if !c.zero_test()? {
                return Ok(Order::Finite(e.clone()));
            }
        }
        Ok(Order::Infinite)
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let trunc = min_trunc(&self.trunc, &o.trunc);
        let mut s = Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.clone())), trunc);
        for (e, c) in &o.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    /// Termwise difference; uses the coefficient subtraction so that equal
    /// tagged balls cancel structurally.
    pub fn sub(&self, o: &Self) -> Self {
        let trunc = min_trunc(&self.trunc, &o.trunc);
        let mut s = Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.clone())), trunc);
        for (e, c) in &o.terms {
            if s.trunc.as_ref().is_some_and(|t| e >= t) {
                continue;
            }
            let v = match s.terms.remove(e) {
                Some(old) => old.sub(c),
                None => c.neg(),
            };
            if !v.is_structural_zero() {
                s.terms.insert(e.clone(), v);
            }
        }
        s
    }

    pub fn scale(&self, a: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.mul(a))), self.trunc.clone())
    }

    /// Multiply by `y^e`.
    pub fn shift(&self, e: &Rat) -> Self {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
            trunc: self.trunc.as_ref().map(|t| t + e),
        }
    }

    /// Lower bound for the order used in truncation bookkeeping: the least
    /// stored exponent, or the truncation point for an empty truncated series.
    fn order_bound(&self) -> Option<Rat> {
        self.min_exponent().cloned().or_else(|| self.trunc.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut trunc: Option<Rat> = None;
        if let Some(t) = &self.trunc {
            let cand = o.order_bound().map(|b| t + b);
            trunc = min_trunc(&trunc, &cand);
        }
        if let Some(t) = &o.trunc {
            let cand = self.order_bound().map(|b| t + b);
            trunc = min_trunc(&trunc, &cand);
        }
        let mut s = Self::zero();
        s.trunc = trunc;
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                s.add_term(e1 + e2, c1.mul(c2));
            }
        }
        s
    }

    /// Product truncated at `cap`, skipping terms that would be dropped anyway.
    pub fn mul_capped(&self, o: &Self, cap: &Rat) -> Self {
        let mut trunc = Some(cap.clone());
        if let Some(t) = &self.trunc {
            trunc = min_trunc(&trunc, &o.order_bound().map(|b| t + b));
        }
        if let Some(t) = &o.trunc {
            trunc = min_trunc(&trunc, &self.order_bound().map(|b| t + b));
        }
        let mut s = Self::zero();
        s.trunc = trunc;
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1 + e2;
                if &e < cap {
                    s.add_term(e, c1.mul(c2));
                }
            }
        }
        s
    }

    pub fn pow(&self, n: usize, ctx: &C::Ctx, cap: Option<&Rat>) -> Self {
        let mut acc = Self::monomial(Rat::zero(), C::one_in(ctx));
        for _ in 0..n {
            acc = match cap {
                Some(c) => acc.mul_capped(self, c),
                None => acc.mul(self),
            };
        }
        acc
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> PuiseuxSeries<D> {
        PuiseuxSeries::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), f(c))), self.trunc.clone())
    }

    pub fn try_map<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<PuiseuxSeries<D>> {
        let mut v = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            v.push((e.clone(), f(c)?));
        }
        Ok(PuiseuxSeries::from_terms(v, self.trunc.clone()))
    }

    /// Checks that every exponent denominator divides at most `cap`.
    pub fn check_denominators(&self, cap: u64) -> Result<()> {
        let d = self.denom();
        if d > BigInt::from(cap) {
            let found = u64::try_from(&d).unwrap_or(u64::MAX);
            return Err(Error::DenominatorCap { found, cap });
        }
        Ok(())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_none()
    }
}

pub fn min_trunc(a: &Option<Rat>, b: &Option<Rat>) -> Option<Rat> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x < y { x.clone() } else { y.clone() }),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

/// Contact order of two arcs: the order of their difference.
pub fn contact_order<C: Coeff>(a: &PuiseuxSeries<C>, b: &PuiseuxSeries<C>) -> Result<Order> {
    a.sub(b).order_y()
}

impl<C: Coeff> PuiseuxSeries<C> {
    /// A positive exponent is known for every term.
    pub fn is_arc(&self) -> bool {
        self.terms.keys().all(|e| e >= &Rat::one())
    }

    pub fn has_zero_exponent(&self) -> bool {
        self.terms.contains_key(&Rat::zero())
    }
}

impl PuiseuxSeries<Rat> {
    pub fn eval_f64(&self, y: f64) -> f64 {
        self.terms.iter().map(|(e, c)| crate::rat::to_f64(c) * y.powf(crate::rat::to_f64(e))).sum()
    }
}
