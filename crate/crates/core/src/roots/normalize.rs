//! Mini-regularity in x, the shear that restores it, and the per-sample
//! rescaling that brings the restriction to the x-axis to the form `±x^m`.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BivarPoly, CBall, Coeff, PuiseuxSeries, Scalar};
use crate::error::{Error, Result};
use crate::rat::{int, pow2, rat, round_dyadic, Rat};

/// Number of shear candidates tried before giving up.
pub const SHEAR_CANDIDATES: usize = 64;

/// Total multiplicity `m(f)`: the lowest total degree `i + q`.
pub fn multiplicity(f: &BivarPoly<Rat>) -> Result<usize> {
    let m = f
        .terms()
        .map(|((i, q), _)| Rat::from_integer((*i).into()) + q)
        .min()
        .ok_or(Error::ZeroPolynomial)?;
    if !m.is_integer() {
        return Err(Error::Precondition("fractional y-exponents".into()));
    }
    usize::try_from(m.to_integer()).map_err(|_| Error::Precondition("multiplicity out of range".into()))
}

/// `m(f)` when `x^{m(f)}` occurs in `f`.
pub fn mini_regular_order(f: &BivarPoly<Rat>) -> Result<usize> {
    let m = multiplicity(f)?;
    match f.get(m as u32, &Rat::zero()) {
        Some(c) if !c.is_zero() => Ok(m),
        _ => Err(Error::NotMiniRegular { multiplicity: m }),
    }
}

/// `f(x + c y, y)`.
pub fn shear(f: &BivarPoly<Rat>, c: &Rat) -> Result<BivarPoly<Rat>> {
    if c.is_zero() {
        return Ok(f.clone());
    }
    let lin = PuiseuxSeries::monomial(Rat::one(), c.clone());
    f.substitute_arc(&lin, None, &())
}

/// The seeded candidate sequence: small nonzero rationals `p/q`, `|p| <= 8`,
/// `1 <= q <= 4`.
pub fn shear_candidates(seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SHEAR_CANDIDATES)
        .map(|_| {
            let mut p = rng.gen_range(-8i64..=7);
            if p >= 0 {
                p += 1;
            }
            rat(p, rng.gen_range(1i64..=4))
        })
        .collect()
}

/// Returns `f(x + c y, y)` mini-regular in x together with `c`; `c = 0` when
/// `f` already is.
pub fn shear_normalize(f: &BivarPoly<Rat>, seed: u64) -> Result<(BivarPoly<Rat>, Rat)> {
    match mini_regular_order(f) {
        Ok(_) => return Ok((f.clone(), Rat::zero())),
        Err(Error::NotMiniRegular { .. }) => {}
        Err(e) => return Err(e),
    }
    for c in shear_candidates(seed) {
        let g = shear(f, &c)?;
        if mini_regular_order(&g).is_ok() {
            return Ok((g, c));
        }
    }
    Err(Error::ShearExhausted(SHEAR_CANDIDATES))
}

/// A certified ball around the positive real `v^{1/m}`.
pub fn real_root_ball(v: &Rat, m: u32, prec: u32) -> Result<CBall> {
    if !v.is_positive() || m == 0 {
        return Err(Error::Precondition("root of a nonpositive value".into()));
    }
    let guess = crate::rat::to_f64(v).powf(1.0 / m as f64);
    let mut r = if guess.is_finite() && guess > 0.0 {
        Rat::from_float(guess).unwrap_or_else(Rat::one)
    } else {
        Rat::one()
    };
    let mm = int(m as i64);
    for _ in 0..64 {
        // Newton step on r^m - v
        let pm1 = pow(&r, m - 1);
        let next = round_dyadic(&(&r - (&pm1 * &r - v) / (&mm * &pm1)), prec + 16);
        if next == r {
            break;
        }
        r = next;
    }
    let mut eps = pow2(-(prec as i64) + 4);
    for _ in 0..64 {
        let lo = &r - &eps;
        let hi = &r + &eps;
        if lo.is_positive() && pow(&lo, m) <= *v && pow(&hi, m) >= *v {
            return Ok(CBall::new(r, Rat::zero(), eps, prec));
        }
        eps = eps * int(4);
    }
    Err(Error::UndecidableZero { prec })
}

fn pow(r: &Rat, m: u32) -> Rat {
    (0..m).fold(Rat::one(), |acc, _| acc * r)
}

/// Result of rescaling `x = s u` so that `F(x, 0)` becomes `±u^m`.
#[derive(Clone, Debug)]
pub struct BoundaryNormalization {
    pub sign: i8,
    pub m: u32,
    /// `x = scale * u`.
    pub scale: Scalar,
    pub poly: BivarPoly<Scalar>,
}

impl BoundaryNormalization {
    pub fn scale_f64(&self) -> f64 {
        self.scale.to_c64().0
    }
}

/// Rescales a sample `F(x, y; t0)` whose x-axis restriction is a single
/// monomial `a x^m`.
pub fn normalize_family_boundary(f: &BivarPoly<Scalar>, prec: u32) -> Result<BoundaryNormalization> {
    let axis: Vec<(u32, &Scalar)> = f.terms().filter(|((_, q), _)| q.is_zero()).map(|((i, _), c)| (*i, c)).collect();
    let nonzero: Vec<(u32, &Scalar)> = axis.into_iter().filter(|(_, c)| !c.is_structural_zero()).collect();
    let [(m, a)] = nonzero[..] else {
        return Err(Error::Precondition("the x-axis restriction must be a single monomial a*x^m".into()));
    };
    let sign = a.real_sign()?;
    if sign == 0 {
        return Err(Error::NonInvertible);
    }
    let scale = match a {
        Scalar::Exact(v) => {
            let av = v.abs();
            if av.is_one() {
                Scalar::Exact(Rat::one())
            } else {
                match exact_root(&av.recip(), m) {
                    Some(s) => Scalar::Exact(s),
                    None => Scalar::Ball(real_root_ball(&av.recip(), m, prec)?),
                }
            }
        }
        Scalar::Ball(b) => {
            let mid = b.re.abs();
            let root = real_root_ball(&mid.recip(), m, prec)?;
            // the radius of a spreads to the root through |d(v^{-1/m})/dv|
            let spread = &b.rad / (&mid - &b.rad) / int(m as i64) * &root.re * int(2);
            Scalar::Ball(CBall::new(root.re.clone(), Rat::zero(), &root.rad + spread, prec))
        }
    };
    let mut poly = BivarPoly::zero();
    let mut powers = vec![Scalar::Exact(Rat::one())];
    for ((i, q), c) in f.terms() {
        while powers.len() <= *i as usize {
            let next = powers.last().expect("nonempty").mul(&scale);
            powers.push(next);
        }
        poly.add_term(*i, q.clone(), c.mul(&powers[*i as usize]));
    }
    // the axis coefficient is ±1 by construction
    poly.set_term(m, Rat::zero(), Scalar::Exact(int(sign as i64)));
    Ok(BoundaryNormalization { sign, m, scale, poly })
}

fn exact_root(v: &Rat, m: u32) -> Option<Rat> {
    let n = integer_root(v.numer(), m)?;
    let d = integer_root(v.denom(), m)?;
    Some(Rat::new(n, d))
}

fn integer_root(n: &num_bigint::BigInt, m: u32) -> Option<num_bigint::BigInt> {
    let r = n.nth_root(m);
    (num_traits::pow(r.clone(), m as usize) == *n).then_some(r)
}
