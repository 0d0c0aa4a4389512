//! Dense univariate polynomials over Q, constant term first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ball::CBall;
use crate::rat::{denom_lcm, fmt_rat, int, Rat};

/// The primitive integer polynomial proportional to `c`, trailing zeros
/// removed.
fn int_primitive(c: &[Rat]) -> Vec<BigInt> {
    let l = denom_lcm(c);
    int_primitive_z(c.iter().map(|r| (r * Rat::from_integer(l.clone())).to_integer()).collect())
}

fn int_primitive_z(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// `lc(b)^k a mod b` over Z.
fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.pop().expect("nonempty remainder");
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (j, bj) in b[..db].iter().enumerate() {
            r[j + k] -= &lr * bj;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    c: Vec<Rat>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.c.iter().map(fmt_rat).collect();
        write!(f, "QPoly[{}]", v.join(", "))
    }
}

impl QPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn zero() -> Self {
        QPoly { c: vec![] }
    }

    pub fn constant(r: Rat) -> Self {
        Self::new(vec![r])
    }

    /// The monomial `u`.
    pub fn x() -> Self {
        Self::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn monomial(k: usize, a: Rat) -> Self {
        let mut c = vec![Rat::zero(); k + 1];
        c[k] = a;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// Multiplicity of the root `0`.
    pub fn low_order(&self) -> usize {
        self.c.iter().position(|a| !a.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.c.iter().rev().fold(Rat::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_ball(&self, z: &CBall) -> CBall {
        let mut acc = CBall::zero(z.prec);
        for a in self.c.iter().rev() {
            acc = acc.mul(z).add(&CBall::from_rat(a, z.prec));
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, a| acc * x + crate::rat::to_f64(a))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.c.iter().enumerate().skip(1).map(|(k, a)| a * int(k as i64)).collect())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn scale(&self, r: &Rat) -> QPoly {
        QPoly::new(self.c.iter().map(|a| a * r).collect())
    }

    pub fn pow(&self, n: usize) -> QPoly {
        (0..n).fold(QPoly::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let l = self.lc().recip();
        self.scale(&l)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] * &inv;
            if !f.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &f * b;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    /// Monic gcd, computed by a primitive remainder sequence over Z.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (int_primitive(&self.c), int_primitive(&o.c));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = int_primitive_z(int_prem(&a, &b));
            a = b;
            b = r;
        }
        QPoly::new(a.into_iter().map(Rat::from_integer).collect()).monic()
    }

    /// Yun's square-free decomposition: monic `s_k` with `self = lc * prod s_k^k`.
    /// Only factors of positive degree are returned.
    pub fn squarefree(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.divrem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    /// `p(u + s)`.
    pub fn shift(&self, s: &Rat) -> QPoly {
        let mut acc = QPoly::zero();
        let lin = QPoly::new(vec![s.clone(), Rat::one()]);
        for a in self.c.iter().rev() {
            acc = acc.mul(&lin).add(&QPoly::constant(a.clone()));
        }
        acc
    }

    /// Characteristic polynomial of multiplication by `self` on Q[u]/(m).
    /// Its roots are the values `self(z)` over the roots `z` of `m`.
    pub fn charpoly_mod(&self, m: &QPoly) -> QPoly {
        let n = m.degree().expect("nonzero modulus");
        let red = self.divrem(m).1;
        let mut mat = vec![vec![Rat::zero(); n]; n];
        for j in 0..n {
            let col = red.mul(&QPoly::monomial(j, Rat::one())).divrem(m).1;
            for (i, row) in mat.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
        }
        faddeev_leverrier(&mat)
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let s = fmt_rat(a);
            parts.push(match k {
                0 => s,
                1 => format!("{s}*{var}"),
                _ => format!("{s}*{var}^{k}"),
            });
        }
        parts.join(" + ")
    }
}

fn faddeev_leverrier(a: &[Vec<Rat>]) -> QPoly {
    let n = a.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Rat::zero();
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = Rat::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -tr / int(k as i64);
    }
    QPoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn yun_splits_multiplicities() {
        // (u-1)^2 (u+2)^3 u
        let p = QPoly::from_ints(&[-1, 1])
            .pow(2)
            .mul(&QPoly::from_ints(&[2, 1]).pow(3))
            .mul(&QPoly::x());
        let sf = p.squarefree();
        let mults: Vec<usize> = sf.iter().map(|(_, k)| *k).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        assert_eq!(sf[1].0, QPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn division_and_gcd() {
        let a = QPoly::from_ints(&[-1, 0, 1]);
        let b = QPoly::from_ints(&[1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, QPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b);
    }

    #[test]
    fn shift_and_eval() {
        let p = QPoly::from_ints(&[0, 2, 1]);
        let s = p.shift(&int(-1));
        assert_eq!(s, QPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(p.eval(&rat(1, 2)), rat(5, 4));
    }

    #[test]
    fn charpoly_gives_values_at_roots() {
        // values of u^2 at roots of u^2 - 2 are both 2
        let m = QPoly::from_ints(&[-2, 0, 1]);
        let v = QPoly::from_ints(&[0, 0, 1]);
        assert_eq!(v.charpoly_mod(&m), QPoly::from_ints(&[4, -4, 1]));
    }
}
