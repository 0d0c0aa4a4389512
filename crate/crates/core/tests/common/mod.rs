//! Seeded generators shared by the property tests and the acceptance run.
#![allow(dead_code)]

use equising_core::algebra::{parse_bivar, BivarPoly, PuiseuxSeries, Scalar};
use equising_core::arcs::{f_height, factorization_defect, BarAnalysis, Branch};
use equising_core::checker::{check_family, CheckConfig, Condition};
use equising_core::corpus::parse_family;
use equising_core::flow::{euler_lemma_check, WeightedForm};
use equising_core::polygon::relative_polygon;
use equising_core::rat::to_f64;
use equising_core::roots::expand::{puiseux_roots, ExpandConfig};
use equising_core::roots::normalize::multiplicity;
use equising_core::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn nonzero(rng: &mut impl Rng, bound: i64) -> i64 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

fn term(c: &str, i: u32, j: u32) -> String {
    let mut s = format!("({c})");
    if i > 0 {
        s.push_str(&format!("*x^{i}"));
    }
    if j > 0 {
        s.push_str(&format!("*y^{j}"));
    }
    s
}

/// A mini-regular polynomial of x-degree at most `max_deg` with integer
/// coefficients in `[-bound, bound]`, written as an expression, together
/// with its multiplicity.
pub fn mini_regular(rng: &mut impl Rng, max_deg: u32, bound: i64) -> (String, u32) {
    let m = rng.gen_range(2..=max_deg);
    let mut terms = vec![term(&nonzero(rng, bound).to_string(), m, 0)];
    let extra = rng.gen_range(1..=4);
    for _ in 0..extra {
        let i = rng.gen_range(0..=max_deg);
        let j = rng.gen_range(m.saturating_sub(i).max(1)..=max_deg + 1);
        terms.push(term(&nonzero(rng, bound).to_string(), i, j));
    }
    (terms.join(" + "), m)
}

/// A family of x-degree at most `max_deg` and t-degree at most `max_t`,
/// mini-regular at `t = 0`.
pub fn family(rng: &mut impl Rng, max_deg: u32, max_t: u32) -> String {
    let m = rng.gen_range(2..=max_deg);
    let mut terms = vec![term(&nonzero(rng, 3).to_string(), m, 0)];
    let extra = rng.gen_range(1..=3);
    for _ in 0..extra {
        let i = rng.gen_range(0..=max_deg);
        let j = rng.gen_range(m.saturating_sub(i).max(1)..=max_deg + 1);
        let mut coeff = String::new();
        for k in 0..=max_t {
            let c = rng.gen_range(-2i64..=2);
            if c == 0 {
                continue;
            }
            let mono = if k == 0 { c.abs().to_string() } else { format!("{}*t^{k}", c.abs()) };
            match (coeff.is_empty(), c < 0) {
                (true, false) => coeff = mono,
                (true, true) => coeff = format!("-{mono}"),
                (false, false) => coeff.push_str(&format!(" + {mono}")),
                (false, true) => coeff.push_str(&format!(" - {mono}")),
            }
        }
        if !coeff.is_empty() {
            terms.push(term(&coeff, i, j));
        }
    }
    terms.join(" + ")
}

/// `Σ a_i X^i Y^{(n-i) h}` with `a_n != 0`, returned with `h` and the
/// coefficients `a_0..a_n`.
pub fn weighted_form(rng: &mut impl Rng) -> (BivarPoly<Rat>, Rat, Vec<Rat>) {
    let h = Rat::new(rng.gen_range(1i64..=4).into(), rng.gen_range(1i64..=3).into());
    let n = rng.gen_range(1u32..=4);
    let mut a: Vec<Rat> = (0..=n).map(|_| Rat::from_integer(rng.gen_range(-3i64..=3).into())).collect();
    a[n as usize] = Rat::from_integer(nonzero(rng, 3).into());
    let terms = a
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Rat::from_integer(0.into()))
        .map(|(i, c)| ((i as u32, Rat::from_integer((n as i64 - i as i64).into()) * &h), c.clone()));
    (BivarPoly::from_terms(terms, None), h, a)
}

pub fn horner(a: &[Rat], u: &Rat) -> Rat {
    a.iter().rev().fold(Rat::from_integer(0.into()), |acc, c| acc * u + c)
}

pub fn derivative(a: &[Rat]) -> Vec<Rat> {
    a.iter().enumerate().skip(1).map(|(i, c)| c * Rat::from_integer((i as i64).into())).collect()
}

/// An arc `a y + b y^2` with small integer coefficients.
pub fn linear_quadratic_arc(rng: &mut impl Rng) -> PuiseuxSeries<Rat> {
    let a = Rat::from_integer(rng.gen_range(-2i64..=2).into());
    let b = Rat::from_integer(rng.gen_range(-2i64..=2).into());
    PuiseuxSeries::from_terms([(Rat::from_integer(1.into()), a), (Rat::from_integer(2.into()), b)], None)
}

/// Factorization of every initial form and the critical-point bound on
/// `count` random mini-regular polynomials.
pub fn initial_form_sweep(seed: u64, count: usize, max_deg: u32) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = ExpandConfig { prec: 256, ..ExpandConfig::default() };
    let bound = Rat::new(1.into(), num_bigint::BigInt::from(10).pow(20));
    for _ in 0..count {
        let (expr, m) = mini_regular(&mut rng, max_deg, 3);
        let f = parse_bivar(&expr).map_err(|e| format!("{expr}: {e}"))?;
        let mult = multiplicity(&f).map_err(|e| format!("{expr}: {e}"))?;
        if mult as u32 != m {
            return Err(format!("{expr}: multiplicity {mult}, expected {m}"));
        }
        let a = BarAnalysis::compute(&f, seed, &cfg).map_err(|e| format!("{expr}: {e}"))?;
        for bar in a.bars.iter().filter(|b| b.height.is_some()) {
            let d = factorization_defect(bar).ok_or_else(|| format!("{expr}: no initial form"))?;
            if d > bound {
                return Err(format!("{expr}: factorization defect {d}"));
            }
        }
        for b in [Branch::Pos, Branch::Neg] {
            let n = a.critical_on(b).count();
            if n + 1 > mult {
                return Err(format!("{expr}: {n} critical points on {} with m = {mult}", b.name()));
            }
        }
    }
    Ok(())
}

/// Relative polygons agree for `λ` and `λ + δ y^e`, `e > h_f(λ)`. Returns
/// the number of pairs compared.
pub fn polygon_invariance(seed: u64, pairs: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = ExpandConfig::default();
    let mut done = 0;
    let mut attempts = 0;
    while done < pairs {
        attempts += 1;
        if attempts > 20 * pairs {
            return Err(format!("only {done} usable pairs in {attempts} attempts"));
        }
        let (expr, _) = mini_regular(&mut rng, 4, 3);
        let f = parse_bivar(&expr).map_err(|e| e.to_string())?;
        let Ok(roots) = puiseux_roots(&f, &cfg) else { continue };
        let lam = linear_quadratic_arc(&mut rng);
        let Ok(Some(h)) = f_height(&lam.map(|c| Scalar::Exact(c.clone())), &roots) else { continue };
        let step = Rat::new(rng.gen_range(1i64..=3).into(), 2.into());
        let delta = Rat::from_integer(nonzero(&mut rng, 3).into());
        let mut moved = lam.clone();
        moved.add_term(&h + step, delta);
        let p = relative_polygon(&f, &lam, &()).map_err(|e| e.to_string())?;
        let q = relative_polygon(&f, &moved, &()).map_err(|e| e.to_string())?;
        if p != q {
            return Err(format!("{expr}: polygons differ for {lam:?} and {moved:?}"));
        }
        done += 1;
    }
    Ok(done)
}

/// Euler-lemma orders on random weighted forms, each cross-checked by the
/// log-slope of `|X W_X| + |Y W_Y|` along `X = u0 v^h`, `Y = v`.
pub fn euler_sweep(seed: u64, count: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let (poly, h, a) = weighted_form(&mut rng);
        let u0 = Rat::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=3).into());
        let (w0, dw0) = (horner(&a, &u0), horner(&derivative(&a), &u0));
        let zero = Rat::from_integer(0.into());
        if (w0 == zero && dw0 == zero) || (w0 == zero && u0 == zero) {
            continue;
        }
        let form = WeightedForm::new(poly, h.clone()).map_err(|e| e.to_string())?;
        let n = (a.len() - 1) as i64;
        let d = Rat::from_integer(n.into()) * &h;
        let r = euler_lemma_check(&form, &u0).map_err(|e| e.to_string())?;
        if r.order.as_ref() != Some(&d) || !r.unit_nonzero {
            return Err(format!("{a:?} h={h} u0={u0}: {r:?}"));
        }
        let s = |v: f64| {
            let (u, hf) = (to_f64(&u0), to_f64(&h));
            let (mut xw, mut yw) = (0.0, 0.0);
            for (i, c) in a.iter().enumerate() {
                let c = to_f64(c);
                let q = (n - i as i64) as f64 * hf;
                let mono = c * (u * v.powf(hf)).powi(i as i32) * v.powf(q);
                xw += i as f64 * mono;
                yw += q * mono;
            }
            xw.abs() + yw.abs()
        };
        let slope = (s(1e-2) / s(1e-3)).ln() / 10f64.ln();
        if (slope - to_f64(&d)).abs() > 1e-6 {
            return Err(format!("{a:?} h={h} u0={u0}: numeric slope {slope}"));
        }
        done += 1;
    }
    Ok(())
}

/// Fails when a report shows (A) without (a), or (A) and (A′) disagreeing.
pub fn consistency_violation(statuses: &[&str; 3]) -> Option<&'static str> {
    let [a, big, prime] = statuses;
    if *big == "holds" && *a == "fails" {
        return Some("(A) holds but (a) fails");
    }
    if (*big == "holds" && *prime == "fails") || (*prime == "holds" && *big == "fails") {
        return Some("(A) and (A') disagree");
    }
    None
}

/// Runs all three conditions on `count` random families; returns how many
/// ended undecided in at least one condition.
pub fn consistency_sweep(seed: u64, count: usize, k: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = CheckConfig { seed, ..CheckConfig::default() };
    let mut undecided = 0;
    for _ in 0..count {
        let expr = family(&mut rng, 4, 2);
        let f = parse_family(&expr, k).map_err(|e| format!("{expr}: {e}"))?;
        let r = check_family(&f, &Condition::ALL, &cfg).map_err(|e| format!("{expr}: {e}"))?;
        let st: Vec<&str> = r.verdicts.iter().map(|v| v.status()).collect();
        let st = [st[0], st[1], st[2]];
        if let Some(why) = consistency_violation(&st) {
            return Err(format!("{expr}: {why} {st:?}"));
        }
        if st.contains(&"undecided") {
            undecided += 1;
        }
    }
    Ok(undecided)
}
