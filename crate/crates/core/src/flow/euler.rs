//! The Euler-lemma check: for a weighted form `W` and `X = u v^h`, `Y = v`,
//! `|X W_X| + |Y W_Y|` is a unit times `|v|^d` near any `u0` that is not a
//! multiple root of `W(u, 1)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::{BivarPoly, QPoly};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, Rat};

/// A polynomial with all terms on one weighted-degree line,
/// `w(X) = h`, `w(Y) = 1`.
#[derive(Clone, Debug)]
pub struct WeightedForm {
    pub poly: BivarPoly<Rat>,
    pub h: Rat,
    pub d: Rat,
}

impl WeightedForm {
    pub fn new(poly: BivarPoly<Rat>, h: Rat) -> Result<WeightedForm> {
        if h <= Rat::zero() {
            return Err(Error::Precondition("the weight h must be positive".into()));
        }
        let mut d: Option<Rat> = None;
        for ((i, q), _) in poly.terms() {
            let w = q + Rat::from_integer((*i).into()) * &h;
            match &d {
                None => d = Some(w),
                Some(d0) if *d0 != w => {
                    return Err(Error::Precondition(format!("not a weighted form: degrees {} and {}", fmt_rat(d0), fmt_rat(&w))));
                }
                _ => {}
            }
        }
        let d = d.ok_or(Error::ZeroPolynomial)?;
        Ok(WeightedForm { poly, h, d })
    }

    /// Reads `h` off two terms with different x-degrees; a form with a single
    /// x-degree gets `fallback`.
    pub fn infer(poly: BivarPoly<Rat>, fallback: Rat) -> Result<WeightedForm> {
        let terms: Vec<(u32, Rat)> = poly.terms().map(|((i, q), _)| (*i, q.clone())).collect();
        let h = terms
            .iter()
            .flat_map(|a| terms.iter().map(move |b| (a, b)))
            .find(|(a, b)| a.0 > b.0)
            .map(|(a, b)| (&b.1 - &a.1) / Rat::from_integer((a.0 - b.0).into()))
            .unwrap_or(fallback);
        WeightedForm::new(poly, h)
    }

    /// `W(u, 1)`.
    pub fn at_one(&self) -> QPoly {
        let deg = self.poly.x_degree().unwrap_or(0) as usize;
        let mut c = vec![Rat::zero(); deg + 1];
        for ((i, _), a) in self.poly.terms() {
            c[*i as usize] += a;
        }
        QPoly::new(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerReport {
    /// The v-order of `|X W_X| + |Y W_Y|` at `u0`; `None` when both terms
    /// vanish identically there.
    pub order: Option<Rat>,
    pub unit_nonzero: bool,
    pub d: Rat,
}

impl EulerReport {
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order.as_ref().map(fmt_rat),
            "unit_nonzero": self.unit_nonzero,
            "d": fmt_rat(&self.d),
        })
    }
}

/// Coefficients of `v^e` as polynomials in `u`, after `X = u v^h`, `Y = v`,
/// of `Σ k(i, q) a X^i Y^q`.
fn substituted(w: &WeightedForm, k: impl Fn(u32, &Rat) -> Rat) -> BTreeMap<Rat, QPoly> {
    let mut out: BTreeMap<Rat, QPoly> = BTreeMap::new();
    for ((i, q), a) in w.poly.terms() {
        let c = k(*i, q) * a;
        if c.is_zero() {
            continue;
        }
        let e = q + Rat::from_integer((*i).into()) * &w.h;
        let slot = out.entry(e).or_insert_with(QPoly::zero);
        *slot = slot.add(&QPoly::monomial(*i as usize, c));
    }
    out
}

fn order_at(terms: &BTreeMap<Rat, QPoly>, u0: &Rat) -> Option<Rat> {
    terms.iter().find(|(_, p)| !p.eval(u0).is_zero()).map(|(e, _)| e.clone())
}

pub fn euler_lemma_check(w: &WeightedForm, u0: &Rat) -> Result<EulerReport> {
    let p = w.at_one();
    let (v, dv) = (p.eval(u0), p.derivative().eval(u0));
    if v.is_zero() && dv.is_zero() {
        return Err(Error::Precondition(format!("u0 = {} is a multiple root of W(u, 1)", fmt_rat(u0))));
    }
    if v.is_zero() && u0.is_zero() {
        return Err(Error::Precondition("W(u0, 1) = 0 with u0 = 0".into()));
    }
    let xwx = substituted(w, |i, _| Rat::from_integer(i.into()));
    let ywy = substituted(w, |_, q| q.clone());
    let order = match (order_at(&xwx, u0), order_at(&ywy, u0)) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let nonzero_at_d = |t: &BTreeMap<Rat, QPoly>| t.get(&w.d).is_some_and(|p| !p.eval(u0).is_zero());
    let unit_nonzero = nonzero_at_d(&xwx) || nonzero_at_d(&ywy);
    Ok(EulerReport { order, unit_nonzero, d: w.d.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_bivar;
    use crate::rat::{int, rat};

    #[test]
    fn cusp_form() {
        let w = WeightedForm::infer(parse_bivar("x^2 - y^3").unwrap(), int(1)).unwrap();
        assert_eq!((w.h.clone(), w.d.clone()), (rat(3, 2), int(3)));
        for u0 in [int(2), int(1)] {
            let r = euler_lemma_check(&w, &u0).unwrap();
            assert_eq!(r.order, Some(int(3)));
            assert!(r.unit_nonzero);
        }
    }

    #[test]
    fn single_term() {
        let w = WeightedForm::new(parse_bivar("x^2").unwrap(), int(1)).unwrap();
        assert_eq!(euler_lemma_check(&w, &int(1)).unwrap().order, Some(int(2)));
        assert!(euler_lemma_check(&w, &int(0)).is_err());
    }

    #[test]
    fn multiple_root_is_rejected() {
        let w = WeightedForm::infer(parse_bivar("x^3 - 2*x^2*y + x*y^2").unwrap(), int(1)).unwrap();
        assert!(matches!(euler_lemma_check(&w, &int(1)), Err(Error::Precondition(_))));
        assert!(euler_lemma_check(&w, &int(2)).unwrap().unit_nonzero);
    }

    #[test]
    fn non_weighted_input_is_rejected() {
        assert!(WeightedForm::new(parse_bivar("x^2 - y^3 + y^2").unwrap(), rat(3, 2)).is_err());
    }
}
