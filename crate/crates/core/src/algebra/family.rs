//! Polynomial families F(x, y; t) with coefficients in Q[t] mod t^K.

use num_traits::Zero;

use super::bivar::{render_terms, BivarPoly};
use super::parse::Poly3;
use super::tseries::TSeries;
use crate::error::{Error, Result};
use crate::rat::Rat;

pub const DEFAULT_T_ORDER: usize = 8;

#[derive(Clone, Debug)]
pub struct FamilyPoly {
    /// Exact coefficients (order above the t-degree, so never truncated).
    exact: BivarPoly<TSeries>,
    param_order: usize,
}

impl FamilyPoly {
    pub fn from_poly3(p: &Poly3, param_order: usize) -> Result<Self> {
        if param_order == 0 {
            return Err(Error::Precondition("t-order K must be at least 1".into()));
        }
        let tdeg = p.keys().map(|k| k[2] as usize).max().unwrap_or(0);
        let exact_order = tdeg + 1;
        let mut cols: std::collections::BTreeMap<(u32, u32), Vec<Rat>> = Default::default();
        for (k, c) in p {
            let v = cols.entry((k[0], k[1])).or_default();
            if v.len() <= k[2] as usize {
                v.resize(k[2] as usize + 1, Rat::zero());
            }
            v[k[2] as usize] = c.clone();
        }
        let exact = BivarPoly::from_terms(
            cols.into_iter().map(|((i, j), v)| ((i, Rat::from_integer(j.into())), TSeries::new(v, exact_order))),
            None,
        );
        Self::new(exact, param_order)
    }

    /// Wraps exact Q[t] coefficients.
    pub fn new(exact: BivarPoly<TSeries>, param_order: usize) -> Result<Self> {
        if exact.get(0, &Rat::zero()).is_some() {
            return Err(Error::Precondition("F(0,0;t) must vanish identically".into()));
        }
        for (_, c) in exact.terms() {
            if !c.is_exact() {
                return Err(Error::Precondition("family coefficients must be exact".into()));
            }
        }
        Ok(FamilyPoly { exact, param_order })
    }

    /// A family that does not depend on t.
    pub fn constant(f: &BivarPoly<Rat>, param_order: usize) -> Result<Self> {
        Self::new(f.map(|c| TSeries::constant(c, 1)), param_order)
    }

    pub fn param_order(&self) -> usize {
        self.param_order
    }

    pub fn with_param_order(&self, k: usize) -> Self {
        FamilyPoly { exact: self.exact.clone(), param_order: k }
    }

    pub fn t_degree(&self) -> usize {
        self.exact.terms().map(|(_, c)| c.coeffs().len().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn exact(&self) -> &BivarPoly<TSeries> {
        &self.exact
    }

    /// Coefficients truncated at order K, the working form of the exact engine.
    pub fn deform(&self) -> BivarPoly<TSeries> {
        let k = self.param_order;
        self.exact.map(|c| c.with_order(k))
    }

    /// `F(x, -y; t)`, the family seen from the lower half-plane.
    pub fn negate_y(&self) -> Result<Self> {
        Ok(FamilyPoly { exact: self.exact.negate_y()?, param_order: self.param_order })
    }

    pub fn specialize(&self, t: &Rat) -> BivarPoly<Rat> {
        self.exact.map(|c| c.eval(t).expect("exact coefficients"))
    }

    pub fn at_zero(&self) -> BivarPoly<Rat> {
        self.exact.map(TSeries::at_zero)
    }

    pub fn depends_on_t(&self) -> bool {
        self.exact.terms().any(|(_, c)| c.coeffs().len() > 1)
    }

    pub fn x_degree(&self) -> u32 {
        self.exact.x_degree().unwrap_or(0)
    }

    pub fn render(&self) -> String {
        render_family(&self.exact)
    }

    /// Exact first partial derivatives, as families over the same order.
    pub fn derivative_x(&self) -> BivarPoly<TSeries> {
        self.exact.derivative_x()
    }

    pub fn derivative_t(&self) -> BivarPoly<TSeries> {
        self.exact.map(TSeries::derivative)
    }
}

/// Renders a bivariate polynomial with coefficients in Q[t].
pub fn render_family(p: &BivarPoly<TSeries>) -> String {
    render_terms(p.terms().collect::<Vec<_>>().into_iter().rev().map(|((i, q), c)| {
        let nonzero: Vec<usize> = (0..c.coeffs().len()).filter(|k| !c.coeff(*k).is_zero()).collect();
        let s = if nonzero.len() == 1 && nonzero[0] == 0 {
            Some(crate::rat::fmt_rat(&c.coeff(0)))
        } else if nonzero.len() == 1 {
            let k = nonzero[0];
            let a = c.coeff(k);
            let tp = if k == 1 { "t".to_string() } else { format!("t^{k}") };
            Some(match crate::rat::fmt_rat(&a).as_str() {
                "1" => tp,
                "-1" => format!("-{tp}"),
                s => format!("{s}*{tp}"),
            })
        } else {
            Some(format!("({})", c.render()))
        };
        (*i, q.clone(), s)
    }))
}
