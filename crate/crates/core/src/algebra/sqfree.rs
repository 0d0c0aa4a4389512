//! Square-free part of a polynomial in Q[y][x] via primitive remainder sequences.

use num_traits::{One, Zero};

use super::bivar::BivarPoly;
use super::upoly::QPoly;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Coefficients in Q[y], indexed by x-degree.
type XPoly = Vec<QPoly>;

fn trim(mut p: XPoly) -> XPoly {
    while p.last().is_some_and(QPoly::is_zero) {
        p.pop();
    }
    p
}

fn from_bivar(f: &BivarPoly<Rat>) -> Result<XPoly> {
    let deg = f.x_degree().unwrap_or(0) as usize;
    let mut cols: Vec<Vec<Rat>> = vec![Vec::new(); deg + 1];
    for ((i, q), c) in f.terms() {
        if !q.is_integer() {
            return Err(Error::Precondition("square-free part needs integer y-exponents".into()));
        }
        let j = usize::try_from(&q.to_integer()).map_err(|_| Error::Precondition("exponent too large".into()))?;
        let col = &mut cols[*i as usize];
        if col.len() <= j {
            col.resize(j + 1, Rat::zero());
        }
        col[j] = c.clone();
    }
    Ok(trim(cols.into_iter().map(QPoly::new).collect()))
}

fn to_bivar(p: &XPoly) -> BivarPoly<Rat> {
    let mut out = BivarPoly::zero();
    for (i, col) in p.iter().enumerate() {
        for (j, c) in col.coeffs().iter().enumerate() {
            out.add_term(i as u32, Rat::from_integer(j.into()), c.clone());
        }
    }
    out
}

fn content(p: &XPoly) -> QPoly {
    p.iter().fold(QPoly::zero(), |g, c| if g.is_zero() { c.monic() } else { g.gcd(c) })
}

fn primitive(p: &XPoly) -> XPoly {
    let c = content(p);
    if c.degree().unwrap_or(0) == 0 {
        let l = p.last().map(|q| q.lc()).unwrap_or_else(Rat::one);
        return p.iter().map(|q| q.scale(&l.recip())).collect();
    }
    p.iter().map(|q| q.divrem(&c).0).collect()
}

/// Pseudo-remainder of `a` by `b` in x.
fn prem(a: &XPoly, b: &XPoly) -> XPoly {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        let mut next: XPoly = r.iter().map(|c| c.mul(&lb)).collect();
        for (j, bj) in b.iter().enumerate() {
            next[j + k] = next[j + k].sub(&bj.mul(&lr));
        }
        r = trim(next);
    }
    r
}

fn gcd_x(a: &XPoly, b: &XPoly) -> XPoly {
    let (mut a, mut b) = (primitive(a), primitive(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive(&r) };
    }
    a
}

/// Exact quotient `a / b`; `b` must divide `a` in Q[y][x].
fn exact_div(a: &XPoly, b: &XPoly) -> Result<XPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    if r.len() <= db {
        return Ok(vec![QPoly::constant(Rat::one())]);
    }
    let mut q = vec![QPoly::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let (c, rem) = r.last().unwrap().divrem(lb);
        if !rem.is_zero() {
            return Err(Error::Precondition("inexact division in Q[y][x]".into()));
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + k] = r[j + k].sub(&bj.mul(&c));
        }
        q[k] = c;
        r = trim(r);
    }
    if !r.is_empty() {
        return Err(Error::Precondition("inexact division in Q[y][x]".into()));
    }
    Ok(trim(q))
}

/// The product of the distinct irreducible factors of `f` involving x, up to a
/// unit of Q[y] (the content of `f` is kept).
pub fn squarefree_part(f: &BivarPoly<Rat>) -> Result<BivarPoly<Rat>> {
    let a = from_bivar(f)?;
    if a.len() <= 1 {
        return Ok(f.clone());
    }
    let da: XPoly = trim(a.iter().enumerate().skip(1).map(|(i, c)| c.scale(&Rat::from_integer(i.into()))).collect());
    let g = gcd_x(&a, &da);
    if g.len() <= 1 {
        return Ok(f.clone());
    }
    Ok(to_bivar(&exact_div(&a, &g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_bivar;

    #[test]
    fn removes_repeated_factors() {
        let f = parse_bivar("(x - y^2)^2 * (x + y)").unwrap();
        let want = parse_bivar("(x - y^2) * (x + y)").unwrap();
        let got = squarefree_part(&f).unwrap();
        // equal up to a rational constant
        let lc = got.get(2, &Rat::zero()).cloned().unwrap();
        assert_eq!(got.scale(&lc.recip()), want);
    }

    #[test]
    fn squarefree_input_is_unchanged() {
        let f = parse_bivar("x^2 - y^3").unwrap();
        assert_eq!(squarefree_part(&f).unwrap(), f);
    }

    #[test]
    fn pure_power() {
        let f = parse_bivar("x^3").unwrap();
        let got = squarefree_part(&f).unwrap();
        assert_eq!(got.dots(), vec![(1, Rat::zero())]);
    }
}
