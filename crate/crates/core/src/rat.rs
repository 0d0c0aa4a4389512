//! Exact rationals and the small helpers used everywhere else.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Renders as `"p/q"`, or `"p"` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // scale manually for huge numerators/denominators
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        Rat::new(r.numer().clone(), r.denom() << (shift as usize))
    } else {
        Rat::new(r.numer() << ((-shift) as usize), r.denom().clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Least common multiple of the denominators, as a `u64`.
pub fn denom_lcm<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

pub fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << (e as usize))
    } else {
        Rat::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Nearest rational of the form m / 2^e with about `prec` significant bits.
pub fn round_dyadic(x: &Rat, prec: u32) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let d = x.denom();
    let d_pow2 = d.trailing_zeros() == Some(d.bits() - 1);
    if d_pow2 && x.numer().bits() <= prec as u64 {
        return x.clone();
    }
    let e = prec as i64 - (x.numer().bits() as i64 - d.bits() as i64);
    let (num, den) = if e >= 0 {
        (x.numer() << (e as usize), d.clone())
    } else {
        (x.numer().clone(), d << ((-e) as usize))
    };
    // round half away from zero
    let two = BigInt::from(2);
    let mag = (num.abs() * &two + &den).div_floor(&(&den * &two));
    let m = if num.sign() == Sign::Minus { -mag } else { mag };
    Rat::new(m, BigInt::one()) * pow2(-e)
}

/// Upper bound of the form m / 2^e with about `bits` significant bits; `x >= 0`.
pub fn round_up(x: &Rat, bits: u32) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let d = x.denom();
    let d_pow2 = d.trailing_zeros() == Some(d.bits() - 1);
    if d_pow2 && x.numer().bits() <= bits as u64 {
        return x.clone();
    }
    let e = bits as i64 - (x.numer().bits() as i64 - d.bits() as i64);
    let (num, den) = if e >= 0 {
        (x.numer() << (e as usize), d.clone())
    } else {
        (x.numer().clone(), d << ((-e) as usize))
    };
    let m = num.div_ceil(&den);
    Rat::from_integer(m) * pow2(-e)
}

/// Integer square-root bounds `(lo, hi)` with `lo <= sqrt(q) <= hi`, about 64 bits each.
pub fn sqrt_bounds(q: &Rat) -> (Rat, Rat) {
    if q.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    let mag = q.numer().bits() as i64 - q.denom().bits() as i64;
    let k = (40 - mag / 2).max(0) as usize;
    let scaled = (q.numer() << (2 * k)) / q.denom();
    let s = scaled.sqrt();
    let scale = pow2(-(k as i64));
    let lo = Rat::from_integer(s.clone()) * &scale;
    let hi = Rat::from_integer(s + 1) * &scale;
    (lo, hi)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
pub fn convergents(x: &Rat, max_den: &BigInt) -> Vec<Rat> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    for _ in 0..200 {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_den {
            break;
        }
        out.push(Rat::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &rest - Rat::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_rounding_is_close() {
        let third = rat(1, 3);
        let r = round_dyadic(&third, 64);
        assert!(r.denom().bits() <= 70);
        let err = (&r - &third).abs();
        assert!(err <= pow2(-64));
        let neg = round_dyadic(&-third.clone(), 64);
        assert_eq!(neg, -r);
    }

    #[test]
    fn round_up_bounds() {
        let x = rat(22, 7);
        let u = round_up(&x, 10);
        assert!(u >= x);
        assert!(&u - &x <= pow2(-7));
    }

    #[test]
    fn sqrt_brackets() {
        let (lo, hi) = sqrt_bounds(&int(2));
        assert!(&lo * &lo <= int(2) && int(2) <= &hi * &hi);
        let (lo, hi) = sqrt_bounds(&rat(1, 1 << 40));
        assert!(&lo * &lo <= rat(1, 1 << 40) && rat(1, 1 << 40) <= &hi * &hi);
    }

    #[test]
    fn convergents_find_small_fractions() {
        let approx = rat(1, 3) + pow2(-80);
        let c = convergents(&approx, &BigInt::from(100));
        assert!(c.contains(&rat(1, 3)));
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_rat(&rat(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&int(4)), "4");
        assert_eq!(parse_rat("6/4"), Some(rat(3, 2)));
    }
}
