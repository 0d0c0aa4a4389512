//! Elements of Q[t] truncated at order K.
//!
//! A value records whether it is known exactly (a polynomial of degree < K)
//! or only modulo `t^K` because some product spilled past the truncation.

use std::fmt;

use num_traits::{One, Zero};

use super::coeff::Coeff;
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<Rat>,
    order: usize,
    exact: bool,
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())?;
        if !self.exact {
            write!(f, " + O(t^{})", self.order)?;
        }
        Ok(())
    }
}

impl TSeries {
    /// Builds from coefficients (constant first). Terms at degree >= `order`
    /// are dropped and the value becomes inexact if any of them was nonzero.
    pub fn new(mut coeffs: Vec<Rat>, order: usize) -> Self {
        let mut exact = true;
        if coeffs.len() > order {
            exact = coeffs[order..].iter().all(Zero::is_zero);
            coeffs.truncate(order);
        }
        let mut s = TSeries { coeffs, order, exact };
        s.trim();
        s
    }

    pub fn constant(c: &Rat, order: usize) -> Self {
        Self::new(vec![c.clone()], order)
    }

    /// The parameter `t` itself.
    pub fn t(order: usize) -> Self {
        Self::new(vec![Rat::zero(), Rat::one()], order)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn mark_inexact(mut self) -> Self {
        self.exact = false;
        self
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Value at t = 0, always exact.
    pub fn at_zero(&self) -> Rat {
        self.coeff(0)
    }

    /// The part of positive t-degree.
    pub fn t_part(&self) -> TSeries {
        let mut c = self.coeffs.clone();
        if !c.is_empty() {
            c[0] = Rat::zero();
        }
        let mut s = TSeries { coeffs: c, order: self.order, exact: self.exact };
        s.trim();
        s
    }

    /// Lowest t-degree with a nonzero coefficient.
    pub fn t_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn vanishes_mod_order(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluate at a rational point; only meaningful when exact.
    pub fn eval(&self, t: &Rat) -> Result<Rat> {
        if !self.exact {
            return Err(Error::TruncatedZero { order: self.order });
        }
        Ok(self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c))
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + crate::rat::to_f64(c))
    }

    pub fn derivative(&self) -> TSeries {
        let c: Vec<Rat> =
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Rat::from_integer(k.into())).collect();
        // the derivative of an inexact value is unknown at degree order-1
        TSeries::new(c, self.order).with_exactness(self.exact)
    }

    fn with_exactness(mut self, exact: bool) -> Self {
        self.exact = self.exact && exact;
        self
    }

    pub fn with_order(&self, order: usize) -> TSeries {
        TSeries::new(self.coeffs.clone(), order).with_exactness(self.exact)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = fmt_rat(&crate::rat::abs(c));
            let body = match (k, mag.as_str()) {
                (0, _) => mag,
                (1, "1") => "t".to_string(),
                (1, _) => format!("{mag}*t"),
                (_, "1") => format!("t^{k}"),
                _ => format!("{mag}*t^{k}"),
            };
            let neg = c < &Rat::zero();
            if out.is_empty() {
                out = if neg { format!("-{body}") } else { body };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl Coeff for TSeries {
    type Ctx = usize;

    fn ctx(&self) -> usize {
        self.order
    }

    fn from_rat(r: &Rat, order: &usize) -> Self {
        TSeries::constant(r, *order)
    }

    fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k) + o.coeff(k)).collect();
        TSeries::new(c, order).with_exactness(self.exact && o.exact)
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        if (self.coeffs.is_empty() && self.exact) || (o.coeffs.is_empty() && o.exact) {
            return TSeries { coeffs: vec![], order, exact: true };
        }
        let mut c = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        // an inexact factor contaminates degrees >= its own known range
        let mut out = TSeries::new(c, order);
        out.exact = out.exact && self.exact && o.exact;
        out
    }

    fn neg(&self) -> Self {
        TSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), order: self.order, exact: self.exact }
    }

    /// Series inverse; exact only for nonzero constants.
    fn inv(&self) -> Result<Self> {
        let a0 = self.at_zero();
        if a0.is_zero() {
            return Err(Error::NonInvertible);
        }
        let inv0 = a0.recip();
        let n = self.order;
        let mut b = vec![Rat::zero(); n];
        if n > 0 {
            b[0] = inv0.clone();
        }
        for k in 1..n {
            let mut s = Rat::zero();
            for j in 1..=k {
                s += self.coeff(j) * &b[k - j];
            }
            b[k] = -s * &inv0;
        }
        let constant = self.coeffs.len() <= 1;
        let mut out = TSeries::new(b, n);
        out.exact = self.exact && constant;
        Ok(out)
    }

    fn is_structural_zero(&self) -> bool {
        self.coeffs.is_empty() && self.exact
    }

    fn zero_test(&self) -> Result<bool> {
        if !self.coeffs.is_empty() {
            Ok(false)
        } else if self.exact {
            Ok(true)
        } else {
            Err(Error::TruncatedZero { order: self.order })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn truncation_marks_inexact() {
        let t = TSeries::t(2);
        let t2 = t.mul(&t);
        assert!(t2.vanishes_mod_order());
        assert!(!t2.is_exact());
        assert!(t2.zero_test().is_err());
        let t = TSeries::t(4);
        let t3 = t.mul(&t).mul(&t);
        assert!(t3.is_exact());
        assert_eq!(t3.coeff(3), int(1));
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let s = TSeries::new(vec![int(1), int(1)], 5);
        let inv = s.inv().unwrap();
        assert!(!inv.is_exact());
        assert_eq!(inv.coeffs(), &[int(1), int(-1), int(1), int(-1), int(1)]);
        let back = s.mul(&inv);
        assert_eq!(back.coeffs(), &[int(1)]);
    }

    #[test]
    fn evaluation() {
        let s = TSeries::new(vec![int(1), int(2), int(3)], 8);
        assert_eq!(s.eval(&int(2)).unwrap(), int(17));
    }
}
