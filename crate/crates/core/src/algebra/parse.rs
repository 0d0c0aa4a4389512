//! Recursive-descent parser for polynomial expressions in x, y and t.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := 'x' | 'y' | 't' | rational | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//! A leading minus on an expression is accepted. Implicit multiplication is not.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bivar::BivarPoly;
use super::family::FamilyPoly;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Polynomial in (x, y, t) with rational coefficients.
pub type Poly3 = BTreeMap<[u32; 3], Rat>;

const MAX_EXPONENT: u32 = 256;

fn add(a: &Poly3, b: &Poly3, sign: bool) -> Poly3 {
    let mut out = a.clone();
    for (k, c) in b {
        let e = out.entry(*k).or_insert_with(Rat::zero);
        if sign {
            *e += c;
        } else {
            *e -= c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn mul(a: &Poly3, b: &Poly3) -> Poly3 {
    let mut out = Poly3::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
            *out.entry(k).or_insert_with(Rat::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn constant(r: Rat) -> Poly3 {
    let mut p = Poly3::new();
    if !r.is_zero() {
        p.insert([0, 0, 0], r);
    }
    p
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected an unsigned integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Poly3> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            add(&Poly3::new(), &self.term()?, false)
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = add(&acc, &self.term()?, true);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = add(&acc, &self.term()?, false);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly3> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = mul(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly3> {
        let base = self.base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        if self.peek() == Some(b'-') {
            return self.err(self.pos, "negative exponents are not allowed");
        }
        let at = self.pos;
        let n = self.uint()?;
        let n = u32::try_from(&n).ok().filter(|n| *n <= MAX_EXPONENT);
        let Some(n) = n else {
            return self.err(at, format!("exponent exceeds {MAX_EXPONENT}"));
        };
        let mut acc = constant(Rat::one());
        for _ in 0..n {
            acc = mul(&acc, &base);
        }
        Ok(acc)
    }

    fn base(&mut self) -> Result<Poly3> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let Some(c) = self.peek() else {
            return self.err(at, "unexpected end of input");
        };
        let out = match c {
            b'x' | b'y' | b't' => {
                self.pos += 1;
                let mut k = [0u32; 3];
                k[match c {
                    b'x' => 0,
                    b'y' => 1,
                    _ => 2,
                }] = 1;
                let mut p = Poly3::new();
                p.insert(k, Rat::one());
                p
            }
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(self.pos, "expected ')'");
                }
                self.pos += 1;
                inner
            }
            b'0'..=b'9' => {
                let num = self.uint()?;
                let r = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let dat = self.pos;
                    let den = self.uint()?;
                    if den.is_zero() {
                        return self.err(dat, "zero denominator");
                    }
                    Rat::new(num, den)
                } else {
                    Rat::from_integer(num)
                };
                constant(r)
            }
            c if c.is_ascii_alphabetic() => {
                return self.err(at, format!("unknown variable '{}'", c as char));
            }
            c => return self.err(at, format!("unexpected character '{}'", c as char)),
        };
        // a base directly followed by another base is implicit multiplication
        if let Some(n) = self.src.get(self.pos) {
            if n.is_ascii_alphanumeric() || *n == b'(' {
                return self.err(self.pos, "implicit multiplication is not accepted; use '*'");
            }
        }
        Ok(out)
    }
}

/// Parses into a polynomial in x, y, t.
pub fn parse_poly3(text: &str) -> Result<Poly3> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err(p.pos, format!("unexpected '{}'", p.src[p.pos] as char));
    }
    Ok(out)
}

/// The result of parsing: a family when `t` occurs, a fixed polynomial otherwise.
#[derive(Clone, Debug)]
pub enum Parsed {
    Poly(BivarPoly<Rat>),
    Family(FamilyPoly),
}

pub fn parse_expression(text: &str, t_order: usize) -> Result<Parsed> {
    let p = parse_poly3(text)?;
    if p.keys().any(|k| k[2] > 0) {
        Ok(Parsed::Family(FamilyPoly::from_poly3(&p, t_order)?))
    } else {
        Ok(Parsed::Poly(poly3_to_bivar(&p)))
    }
}

pub(crate) fn poly3_to_bivar(p: &Poly3) -> BivarPoly<Rat> {
    BivarPoly::from_terms(p.iter().map(|(k, c)| ((k[0], Rat::from_integer(k[1].into())), c.clone())), None)
}

/// Parses an expression that must not contain `t`.
pub fn parse_bivar(text: &str) -> Result<BivarPoly<Rat>> {
    let p = parse_poly3(text)?;
    if p.keys().any(|k| k[2] > 0) {
        return Err(Error::Parse { pos: text.find('t').unwrap_or(0), msg: "unexpected parameter 't'".into() });
    }
    Ok(poly3_to_bivar(&p))
}
