//! Numeric coefficients that stay exact rationals until an irrational value
//! forces a ball.

use std::fmt;

use num_traits::{Signed, Zero};

use super::ball::CBall;
use super::coeff::Coeff;
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, to_f64, Rat};

#[derive(Clone, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Ball(CBall),
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Ball(b) => write!(f, "{b:?}"),
        }
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::Exact(r)
    }
}

impl From<CBall> for Scalar {
    fn from(b: CBall) -> Self {
        Scalar::Ball(b)
    }
}

impl Scalar {
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Ball(_) => None,
        }
    }

    pub fn to_ball(&self, prec: u32) -> CBall {
        match self {
            Scalar::Exact(r) => CBall::from_rat(r, prec),
            Scalar::Ball(b) => b.clone(),
        }
    }

    fn prec_of(&self) -> u32 {
        match self {
            Scalar::Exact(_) => 0,
            Scalar::Ball(b) => b.prec,
        }
    }

    /// Midpoint has zero imaginary part. Balls only acquire a real midpoint
    /// through real arithmetic or certified real snapping.
    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Ball(b) => b.is_real_mid(),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone()),
            Scalar::Ball(b) => Scalar::Ball(b.conj()),
        }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        match self {
            Scalar::Exact(r) => (to_f64(r), 0.0),
            Scalar::Ball(b) => b.to_c64(),
        }
    }

    pub fn radius(&self) -> Rat {
        match self {
            Scalar::Exact(_) => Rat::zero(),
            Scalar::Ball(b) => b.rad.clone(),
        }
    }

    /// Real and imaginary midpoint together with the radius.
    pub fn parts(&self) -> (Rat, Rat, Rat) {
        match self {
            Scalar::Exact(r) => (r.clone(), Rat::zero(), Rat::zero()),
            Scalar::Ball(b) => (b.re.clone(), b.im.clone(), b.rad.clone()),
        }
    }

    /// Both values may be equal (exact comparison or overlapping balls).
    pub fn may_equal(&self, o: &Scalar) -> bool {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let p = self.prec_of().max(o.prec_of()).max(64);
                self.to_ball(p).overlaps(&o.to_ball(p))
            }
        }
    }

    /// Sign of a real value, erroring when a ball straddles zero.
    pub fn real_sign(&self) -> Result<i8> {
        match self {
            Scalar::Exact(r) => Ok(if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }),
            Scalar::Ball(b) => {
                if b.is_exact_zero() {
                    Ok(0)
                } else if b.re > b.rad {
                    Ok(1)
                } else if -&b.re > b.rad {
                    Ok(-1)
                } else {
                    Err(Error::UndecidableZero { prec: b.prec })
                }
            }
        }
    }
}

impl Coeff for Scalar {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.prec_of().max(crate::DEFAULT_PRECISION)
    }

    fn from_rat(r: &Rat, _: &u32) -> Self {
        Scalar::Exact(r.clone())
    }

    fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            (Scalar::Exact(a), Scalar::Ball(b)) | (Scalar::Ball(b), Scalar::Exact(a)) => {
                if a.is_zero() {
                    Scalar::Ball(b.clone())
                } else {
                    Scalar::Ball(b.add(&CBall::from_rat(a, b.prec)))
                }
            }
            (Scalar::Ball(a), Scalar::Ball(b)) => Scalar::Ball(a.add(b)),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Ball(a), Scalar::Ball(b)) => Scalar::Ball(a.sub(b)),
            _ => self.add(&o.neg()),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            (Scalar::Exact(a), Scalar::Ball(b)) | (Scalar::Ball(b), Scalar::Exact(a)) => {
                if a.is_zero() {
                    Scalar::Exact(Rat::zero())
                } else {
                    Scalar::Ball(b.mul_rat(a))
                }
            }
            (Scalar::Ball(a), Scalar::Ball(b)) => Scalar::Ball(a.mul(b)),
        }
    }

    fn neg(&self) -> Self {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Ball(b) => Scalar::Ball(b.neg()),
        }
    }

    fn inv(&self) -> Result<Self> {
        match self {
            Scalar::Exact(a) => a.inv().map(Scalar::Exact),
            Scalar::Ball(b) => b.inv().map(Scalar::Ball),
        }
    }

    fn is_structural_zero(&self) -> bool {
        match self {
            Scalar::Exact(a) => a.is_zero(),
            Scalar::Ball(b) => b.is_exact_zero(),
        }
    }

    fn zero_test(&self) -> Result<bool> {
        match self {
            Scalar::Exact(a) => Ok(a.is_zero()),
            Scalar::Ball(b) => {
                if b.is_exact_zero() {
                    Ok(true)
                } else if b.contains_zero() {
                    Err(Error::UndecidableZero { prec: b.prec })
                } else {
                    Ok(false)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn exact_stays_exact() {
        let a = Scalar::Exact(rat(1, 2));
        let b = Scalar::Exact(rat(1, 3));
        assert_eq!(a.mul(&b), Scalar::Exact(rat(1, 6)));
    }

    #[test]
    fn mixing_promotes_and_contains() {
        let a = Scalar::Exact(rat(1, 3));
        let b = Scalar::Ball(CBall::from_rat(&rat(2, 7), 128));
        let p = a.mul(&b);
        assert!(!p.is_exact());
        assert!(p.to_ball(128).contains_rat(&rat(2, 21)));
    }

    #[test]
    fn ball_zero_test() {
        let z = Scalar::Ball(CBall::new(int(0), int(0), rat(1, 100), 128));
        assert!(z.zero_test().is_err());
        let nz = Scalar::Ball(CBall::from_rat(&int(3), 128));
        assert_eq!(nz.zero_test(), Ok(false));
    }
}
