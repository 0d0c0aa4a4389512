use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// A coefficient ring usable in series and bivariate polynomials.
///
/// `Ctx` carries whatever a constant needs to be built: nothing for exact
/// rationals, the truncation order for parameter series, the working
/// precision for balls.
pub trait Coeff: Clone + Debug + Send + Sync {
    type Ctx: Clone + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn from_rat(r: &Rat, ctx: &Self::Ctx) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    /// The representation is exactly zero; such terms are never stored.
    fn is_structural_zero(&self) -> bool;

    /// Decide whether the value is zero. Exact domains always answer; balls
    /// straddling zero and truncated series that vanish modulo `t^K` report an error.
    fn zero_test(&self) -> Result<bool>;

    fn zero_in(ctx: &Self::Ctx) -> Self {
        Self::from_rat(&Rat::zero(), ctx)
    }

    fn one_in(ctx: &Self::Ctx) -> Self {
        Self::from_rat(&Rat::one(), ctx)
    }

    fn mul_rat(&self, r: &Rat) -> Self {
        self.mul(&Self::from_rat(r, &self.ctx()))
    }

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    fn pow_n(&self, n: usize) -> Self {
        let mut acc = Self::one_in(&self.ctx());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Nonzero for certain; errors propagate from `zero_test`.
    fn is_nonzero(&self) -> Result<bool> {
        self.zero_test().map(|z| !z)
    }
}

impl Coeff for Rat {
    type Ctx = ();

    fn ctx(&self) {}
    fn from_rat(r: &Rat, _: &()) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::NonInvertible)
        } else {
            Ok(self.recip())
        }
    }
    fn is_structural_zero(&self) -> bool {
        self.is_zero()
    }
    fn zero_test(&self) -> Result<bool> {
        Ok(self.is_zero())
    }
}
