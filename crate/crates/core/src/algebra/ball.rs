//! Complex disks with dyadic rational midpoints and outward-rounded radii.
//!
//! Every operation returns a disk that contains every exact result obtainable
//! from points of the operand disks. Midpoints are rounded to `prec`
//! significant bits and the rounding error is folded into the radius.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{round_dyadic, round_up, sqrt_bounds, to_f64, Rat};

const RADIUS_BITS: u32 = 32;

static NEXT_TAG: AtomicU64 = AtomicU64::new(1);

/// Fresh identity for an isolated algebraic number; two balls carrying the same
/// tag denote the same exact value.
pub fn fresh_tag() -> u64 {
    NEXT_TAG.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone, PartialEq)]
pub struct CBall {
    pub re: Rat,
    pub im: Rat,
    pub rad: Rat,
    pub prec: u32,
    pub tag: Option<u64>,
}

impl fmt::Debug for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:.6e}{:+.6e}i ± {:.1e})",
            to_f64(&self.re),
            to_f64(&self.im),
            to_f64(&self.rad)
        )
    }
}

fn add_abs(a: &Rat, b: &Rat) -> Rat {
    a.abs() + b.abs()
}

impl CBall {
    pub fn new(re: Rat, im: Rat, rad: Rat, prec: u32) -> Self {
        Self::rounded(re, im, rad, prec)
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        Self::rounded(r.clone(), Rat::zero(), Rat::zero(), prec)
    }

    pub fn zero(prec: u32) -> Self {
        CBall { re: Rat::zero(), im: Rat::zero(), rad: Rat::zero(), prec, tag: None }
    }

    fn rounded(re: Rat, im: Rat, rad: Rat, prec: u32) -> Self {
        let re2 = round_dyadic(&re, prec);
        let im2 = round_dyadic(&im, prec);
        let err = add_abs(&(&re - &re2), &(&im - &im2));
        let rad = round_up(&(rad + err), RADIUS_BITS);
        CBall { re: re2, im: im2, rad, prec, tag: None }
    }

    pub fn with_tag(mut self, tag: u64) -> Self {
        self.tag = Some(tag);
        self
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::rounded(self.re.clone(), self.im.clone(), self.rad.clone(), prec)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.rad.is_zero()
    }

    /// Squared modulus of the midpoint (exact).
    pub fn mid_norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs_upper(&self) -> Rat {
        sqrt_bounds(&self.mid_norm_sqr()).1 + &self.rad
    }

    pub fn abs_lower(&self) -> Rat {
        let lo = sqrt_bounds(&self.mid_norm_sqr()).0 - &self.rad;
        if lo.is_negative() {
            Rat::zero()
        } else {
            lo
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid_norm_sqr() <= &self.rad * &self.rad
    }

    pub fn overlaps(&self, other: &CBall) -> bool {
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        let r = &self.rad + &other.rad;
        &dr * &dr + &di * &di <= &r * &r
    }

    /// The disk `other` lies inside `self`.
    pub fn contains(&self, other: &CBall) -> bool {
        if other.rad > self.rad {
            return false;
        }
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        let r = &self.rad - &other.rad;
        &dr * &dr + &di * &di <= &r * &r
    }

    pub fn contains_rat(&self, x: &Rat) -> bool {
        let dr = &self.re - x;
        &dr * &dr + &self.im * &self.im <= &self.rad * &self.rad
    }

    pub fn is_real_mid(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CBall { re: self.re.clone(), im: -&self.im, rad: self.rad.clone(), prec: self.prec, tag: None }
    }

    pub fn neg(&self) -> Self {
        CBall { re: -&self.re, im: -&self.im, rad: self.rad.clone(), prec: self.prec, tag: None }
    }

    pub fn add(&self, o: &CBall) -> Self {
        Self::rounded(&self.re + &o.re, &self.im + &o.im, &self.rad + &o.rad, self.prec.max(o.prec))
    }

    pub fn sub(&self, o: &CBall) -> Self {
        if self.tag.is_some() && self.tag == o.tag {
            return CBall::zero(self.prec.max(o.prec));
        }
        Self::rounded(&self.re - &o.re, &self.im - &o.im, &self.rad + &o.rad, self.prec.max(o.prec))
    }

    pub fn mul(&self, o: &CBall) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            Rat::zero()
        } else {
            let a = sqrt_bounds(&self.mid_norm_sqr()).1;
            let b = sqrt_bounds(&o.mid_norm_sqr()).1;
            &a * &o.rad + &b * &self.rad + &self.rad * &o.rad
        };
        Self::rounded(re, im, rad, self.prec.max(o.prec))
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        Self::rounded(&self.re * r, &self.im * r, &self.rad * r.abs(), self.prec)
    }

    pub fn inv(&self) -> Result<Self> {
        let lo = self.abs_lower();
        if lo.is_zero() || lo <= self.rad {
            return Err(Error::UndecidableZero { prec: self.prec });
        }
        let n2 = self.mid_norm_sqr();
        let re = &self.re / &n2;
        let im = -&self.im / &n2;
        let rad = if self.rad.is_zero() {
            Rat::zero()
        } else {
            let mlo = sqrt_bounds(&n2).0;
            let gap = &mlo - &self.rad;
            if !gap.is_positive() {
                return Err(Error::UndecidableZero { prec: self.prec });
            }
            &self.rad / (&mlo * gap)
        };
        Ok(Self::rounded(re, im, rad, self.prec))
    }

    pub fn div(&self, o: &CBall) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    pub fn from_c64(re: f64, im: f64, prec: u32) -> Self {
        let r = Rat::from_float(re).unwrap_or_else(Rat::zero);
        let i = Rat::from_float(im).unwrap_or_else(Rat::zero);
        Self::rounded(r, i, Rat::zero(), prec)
    }

    /// Collapse the imaginary part into the radius, keeping a real midpoint.
    pub fn snap_real(&self) -> Self {
        let rad = round_up(&(&self.rad + self.im.abs()), RADIUS_BITS);
        CBall { re: self.re.clone(), im: Rat::zero(), rad, prec: self.prec, tag: self.tag }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn containment_of_exact_results() {
        let prec = 64;
        let a = CBall::from_rat(&rat(1, 3), prec);
        let b = CBall::from_rat(&rat(2, 7), prec);
        let p = a.mul(&b);
        assert!(p.contains_rat(&rat(2, 21)));
        let q = a.div(&b).unwrap();
        assert!(q.contains_rat(&rat(7, 6)));
        let s = a.sub(&b);
        assert!(s.contains_rat(&rat(1, 21)));
    }

    #[test]
    fn inverse_of_ball_around_zero_is_undecidable() {
        let z = CBall::new(Rat::zero(), Rat::zero(), rat(1, 1000), 64);
        assert!(z.inv().is_err());
        assert!(z.contains_zero());
    }

    #[test]
    fn equal_tags_cancel() {
        let a = CBall::from_rat(&int(2), 64).with_tag(fresh_tag());
        assert!(a.sub(&a.clone()).is_exact_zero());
    }
}
