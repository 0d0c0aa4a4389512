//! Certified isolation of the complex roots of univariate polynomials.
//!
//! Approximations come from Aberth's method in double precision, are polished
//! by Weierstrass iterations at the working precision, and are then enclosed
//! in disks certified by the Weierstrass inclusion theorem: with
//! `W_i = p(z_i) / (a_n prod_{j != i} (z_i - z_j))`, the disks `D(z_i, n|W_i|)`
//! cover the roots and every connected component of `k` disks holds `k` roots.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::ball::fresh_tag;
use crate::algebra::{CBall, QPoly, Scalar};
use crate::error::{Error, Result};
use crate::rat::{convergents, denom_lcm, Rat};

#[derive(Clone, Copy, Debug, PartialEq)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)
    }
    fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn aberth_f64(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    let lead = c[n];
    let cauchy = 1.0 + c[..n].iter().map(|a| a.div(lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            C64::new(cauchy * 0.5 * ang.cos(), cauchy * 0.5 * ang.sin())
        })
        .collect();
    let dc: Vec<C64> = (1..=n).map(|k| C64::new(c[k].re * k as f64, c[k].im * k as f64)).collect();
    let eval = |p: &[C64], x: C64| p.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc.mul(x).add(*a));
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let pz = eval(c, z[i]);
            let dz = eval(&dc, z[i]);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz.div(dz);
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(z[j]);
                    if d.norm() > 0.0 {
                        s = s.add(C64::new(1.0, 0.0).div(d));
                    }
                }
            }
            let w = ratio.div(C64::new(1.0, 0.0).sub(ratio.mul(s)));
            if w.re.is_finite() && w.im.is_finite() {
                z[i] = z[i].sub(w);
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// A complex number `(re + i im) / 2^scale` with integer parts.
#[derive(Clone, Debug)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn zero() -> Fx {
        Fx { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn from_rats(re: &Rat, im: &Rat, scale: usize) -> Fx {
        let conv = |r: &Rat| (r.numer() << scale) / r.denom();
        Fx { re: conv(re), im: conv(im) }
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Fx, scale: usize) -> Fx {
        Fx {
            re: (&self.re * &o.re - &self.im * &o.im) >> scale,
            im: (&self.re * &o.im + &self.im * &o.re) >> scale,
        }
    }

    fn div(&self, o: &Fx, scale: usize) -> Option<Fx> {
        let n = &o.re * &o.re + &o.im * &o.im;
        if n.is_zero() {
            return None;
        }
        Some(Fx {
            re: ((&self.re * &o.re + &self.im * &o.im) << scale) / &n,
            im: ((&self.im * &o.re - &self.re * &o.im) << scale) / &n,
        })
    }

    fn bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }

    fn to_ball(&self, scale: usize, prec: u32) -> CBall {
        let den = BigInt::one() << scale;
        point(&Rat::new(self.re.clone(), den.clone()), &Rat::new(self.im.clone(), den), prec)
    }
}

fn point(re: &Rat, im: &Rat, prec: u32) -> CBall {
    CBall::new(re.clone(), im.clone(), Rat::zero(), prec)
}

fn eval_ball(coeffs: &[CBall], z: &CBall) -> CBall {
    let mut acc = CBall::zero(z.prec);
    for a in coeffs.iter().rev() {
        acc = acc.mul(z).add(a);
    }
    acc
}

/// Certified disks around the roots of a polynomial with simple roots,
/// sorted by midpoint. Each disk contains exactly one root of every polynomial
/// whose coefficients lie in the given balls.
pub fn isolate_simple(coeffs: &[CBall], prec: u32) -> Result<Vec<CBall>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = &coeffs[n];
    if lead.contains_zero() {
        return Err(Error::UndecidableZero { prec });
    }
    let c64: Vec<C64> = coeffs.iter().map(|b| {
        let (re, im) = b.to_c64();
        C64::new(re, im)
    }).collect();
    let approx = aberth_f64(&c64);
    let scale = prec as usize + 32;
    let mids: Vec<Fx> = coeffs.iter().map(|b| Fx::from_rats(&b.re, &b.im, scale)).collect();
    let mut z: Vec<Fx> = approx
        .iter()
        .map(|a| {
            let (re, im) = (Rat::from_float(a.re).unwrap_or_else(Rat::zero), Rat::from_float(a.im).unwrap_or_else(Rat::zero));
            Fx::from_rats(&re, &im, scale)
        })
        .collect();
    // Weierstrass polishing in fixed point
    for _ in 0..200 {
        let mut converged = true;
        let mut next = z.clone();
        for i in 0..n {
            let pz = mids.iter().rev().fold(Fx::zero(), |acc, a| acc.mul(&z[i], scale).add(a));
            let mut den = mids[n].clone();
            for j in 0..n {
                if j != i {
                    den = den.mul(&z[i].sub(&z[j]), scale);
                }
            }
            let Some(w) = pz.div(&den, scale) else { continue };
            if w.bits() + prec as u64 > z[i].bits().max(scale as u64) + 8 {
                converged = false;
            }
            next[i] = z[i].sub(&w);
        }
        z = next;
        if converged {
            break;
        }
    }
    let z: Vec<CBall> = z.iter().map(|v| v.to_ball(scale, prec)).collect();
    let nn = Rat::from_integer(n.into());
    let mut disks = Vec::with_capacity(n);
    for i in 0..n {
        let pz = eval_ball(coeffs, &z[i]);
        let mut den_lo = lead.abs_lower();
        for j in 0..n {
            if j != i {
                den_lo *= z[i].sub(&z[j]).abs_lower();
            }
        }
        if !den_lo.is_positive() {
            return Err(Error::UndecidableZero { prec });
        }
        let r = crate::rat::round_up(&(&nn * pz.abs_upper() / den_lo), 32);
        disks.push(CBall { re: z[i].re.clone(), im: z[i].im.clone(), rad: r, prec, tag: None });
    }
    for i in 0..n {
        for j in i + 1..n {
            if disks[i].overlaps(&disks[j]) {
                return Err(Error::UndecidableZero { prec });
            }
        }
    }
    sort_balls(&mut disks);
    Ok(disks.into_iter().map(|d| d.with_tag(fresh_tag())).collect())
}

fn sort_balls(v: &mut [CBall]) {
    v.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
}

/// For a polynomial with real coefficients: snap certified real roots onto the
/// real axis. Returns `(disk, is_real)` per root.
pub fn classify_real(disks: &[CBall]) -> Result<Vec<(CBall, bool)>> {
    let mut out = Vec::with_capacity(disks.len());
    for (i, d) in disks.iter().enumerate() {
        let c = d.conj();
        let partners: Vec<usize> = (0..disks.len()).filter(|&j| c.overlaps(&disks[j])).collect();
        let crosses_axis = d.im.abs() <= d.rad;
        if partners == [i] && crosses_axis {
            let s = d.snap_real();
            if disks.iter().enumerate().any(|(j, o)| j != i && o.overlaps(&s)) {
                return Err(Error::UndecidableZero { prec: d.prec });
            }
            out.push((s, true));
        } else if !crosses_axis {
            out.push((d.clone(), false));
        } else {
            return Err(Error::UndecidableZero { prec: d.prec });
        }
    }
    Ok(out)
}

/// A root of a polynomial with its multiplicity.
#[derive(Clone, Debug)]
pub struct IsoRoot {
    pub z: Scalar,
    pub mult: usize,
    pub real: bool,
}

impl IsoRoot {
    pub fn ball(&self, prec: u32) -> CBall {
        self.z.to_ball(prec)
    }
}

fn integer_lc(p: &QPoly) -> BigInt {
    let l = denom_lcm(p.coeffs());
    let lc = p.lc() * Rat::from_integer(l);
    // content does not matter for a bound on denominators
    lc.numer().abs()
}

/// Every complex root of a rational polynomial, with multiplicity, rational
/// roots kept exact. Sorted by (real, imaginary) midpoint.
pub fn roots_exact(p: &QPoly, prec: u32) -> Result<Vec<IsoRoot>> {
    let mut out = Vec::new();
    for (s, k) in p.squarefree() {
        let mut rest = s.clone();
        let mut found: Vec<Rat> = Vec::new();
        let mut disks: Option<Vec<CBall>> = None;
        if rest.degree() == Some(1) {
            found.push(-rest.coeff(0) / rest.coeff(1));
            rest = QPoly::constant(Rat::one());
        } else {
            let lc = integer_lc(&rest);
            if lc.bits() <= 64 {
                let balls: Vec<CBall> = rest.coeffs().iter().map(|c| CBall::from_rat(c, prec)).collect();
                let all = isolate_simple(&balls, prec)?;
                for d in &all {
                    if d.im.abs() > d.rad {
                        continue;
                    }
                    for cand in convergents(&d.re, &lc) {
                        if d.contains_rat(&cand) && rest.eval(&cand).is_zero() {
                            found.push(cand);
                            break;
                        }
                    }
                }
                for r in &found {
                    rest = rest.divrem(&QPoly::new(vec![-r.clone(), Rat::one()])).0;
                }
                if found.is_empty() {
                    disks = Some(all);
                }
            }
        }
        for r in found {
            out.push(IsoRoot { z: Scalar::Exact(r), mult: k, real: true });
        }
        if rest.degree().unwrap_or(0) > 0 {
            let disks = match disks {
                Some(d) => d,
                None => {
                    let balls: Vec<CBall> = rest.coeffs().iter().map(|c| CBall::from_rat(c, prec)).collect();
                    isolate_simple(&balls, prec)?
                }
            };
            for (d, real) in classify_real(&disks)? {
                out.push(IsoRoot { z: Scalar::Ball(d), mult: k, real });
            }
        }
    }
    out.sort_by(|a, b| {
        let (ar, ai, _) = a.z.parts();
        let (br, bi, _) = b.z.parts();
        ar.cmp(&br).then(ai.cmp(&bi))
    });
    Ok(out)
}

/// Roots of a polynomial with ball coefficients, all assumed simple.
pub fn roots_simple(coeffs: &[Scalar], prec: u32, real_coeffs: bool) -> Result<Vec<IsoRoot>> {
    if coeffs.iter().all(Scalar::is_exact) {
        let q = QPoly::new(coeffs.iter().map(|c| c.as_rat().cloned().expect("exact")).collect());
        let r = roots_exact(&q, prec)?;
        if r.iter().any(|x| x.mult > 1) {
            return Err(Error::Precondition("expected simple roots".into()));
        }
        return Ok(r);
    }
    let balls: Vec<CBall> = coeffs.iter().map(|c| c.to_ball(prec)).collect();
    let disks = isolate_simple(&balls, prec)?;
    let classified: Vec<(CBall, bool)> = if real_coeffs {
        classify_real(&disks)?
    } else {
        disks.into_iter().map(|d| (d, false)).collect()
    };
    Ok(classified.into_iter().map(|(d, real)| IsoRoot { z: Scalar::Ball(d), mult: 1, real }).collect())
}
