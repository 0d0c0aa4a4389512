//! The level-preserving vector field: per-arc fields in shifted coordinates,
//! the partition of unity that glues them, and the rescaling that makes the
//! family constant on the x-axis.

use num_traits::Num;

use crate::algebra::{FamilyPoly, PuiseuxSeries, TSeries};
use crate::arcs::Branch;
use crate::error::{Error, Result};
use crate::rat::to_f64;

/// `p_i = q_i / (q_1 + … + q_r)` with `q_i = ∏_{k≠i} (x - α_k)^2`.
pub fn partition_of_unity<T: Num + Clone>(x: &T, alphas: &[T]) -> Result<Vec<T>> {
    let sq: Vec<T> = alphas
        .iter()
        .map(|a| {
            let d = x.clone() - a.clone();
            d.clone() * d
        })
        .collect();
    let q: Vec<T> = (0..sq.len())
        .map(|i| sq.iter().enumerate().filter(|(k, _)| *k != i).fold(T::one(), |acc, (_, s)| acc * s.clone()))
        .collect();
    let total = q.iter().cloned().fold(T::zero(), |a, b| a + b);
    if total.is_zero() {
        return Err(Error::Singular("the point lies on two of the arcs".into()));
    }
    Ok(q.into_iter().map(|qi| qi / total.clone()).collect())
}

/// The field `V` in shifted coordinates, as `(dX, dY, dt)` per unit of the
/// flow parameter, from the partials `(F_X, F_Y, F_t)` of the shifted family.
pub fn field_v(x: f64, y: f64, fx: f64, fy: f64, ft: f64) -> Result<[f64; 3]> {
    let (a, b) = (x * fx, y * fy);
    let d = a * a + b * b;
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Singular(format!("(X F_X)^2 + (Y F_Y)^2 vanishes at X = {x:e}, Y = {y:e}")));
    }
    Ok([a * ft / d * x, b * ft / d * y, -1.0])
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * t + a)
}

fn dhorner(c: &[f64], t: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, a)| acc * t + k as f64 * a)
}

fn tcoeffs(c: &TSeries) -> Vec<f64> {
    c.coeffs().iter().map(to_f64).collect()
}

/// `F(x, y; t)` in floating point, with `F(x, 0; t) = a(t) x^m`.
#[derive(Clone, Debug)]
pub struct LevelFunction {
    terms: Vec<(i32, i32, Vec<f64>)>,
    m: i32,
    axis: Vec<f64>,
}

impl LevelFunction {
    pub fn new(family: &FamilyPoly) -> Result<LevelFunction> {
        let mut terms = Vec::new();
        let mut axis: Vec<(i32, Vec<f64>)> = Vec::new();
        for ((i, q), c) in family.exact().terms() {
            if !q.is_integer() {
                return Err(Error::Precondition("the flow needs integer y-exponents".into()));
            }
            let q = i32::try_from(q.to_integer()).map_err(|_| Error::Precondition("y-exponent out of range".into()))?;
            let c = tcoeffs(c);
            if q == 0 {
                axis.push((*i as i32, c.clone()));
            }
            terms.push((*i as i32, q, c));
        }
        let [(m, a)] = &axis[..] else {
            return Err(Error::Precondition("F(x, 0; t) must be a single monomial a(t) x^m".into()));
        };
        if horner(a, 0.0) == 0.0 {
            return Err(Error::Precondition("a(0) must not vanish".into()));
        }
        Ok(LevelFunction { terms, m: *m, axis: a.clone() })
    }

    /// `(F, F_x, F_y, F_t)`.
    pub fn eval(&self, x: f64, y: f64, t: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, q, c) in &self.terms {
            let (a, da) = (horner(c, t), dhorner(c, t));
            let xi = x.powi(*i);
            let yq = y.powi(*q);
            out[0] += a * xi * yq;
            if *i > 0 {
                out[1] += a * *i as f64 * x.powi(i - 1) * yq;
            }
            if *q > 0 {
                out[2] += a * xi * *q as f64 * y.powi(q - 1);
            }
            out[3] += da * xi * yq;
        }
        out
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// `s(t) = |a(t)|^{-1/m}` and `s'(t)`, so that `F(s u, 0; t) = ±u^m`.
    pub fn scale(&self, t: f64) -> Result<(f64, f64)> {
        let a = horner(&self.axis, t);
        if a == 0.0 {
            return Err(Error::Singular(format!("a(t) vanishes at t = {t}")));
        }
        let s = a.abs().powf(-1.0 / self.m as f64);
        let ds = -s / self.m as f64 * dhorner(&self.axis, t) / a;
        Ok((s, ds))
    }

    /// `(G, G_u, G_y, G_t)` for `G(u, y; t) = F(s(t) u, y; t)`.
    pub fn normalized(&self, u: f64, y: f64, t: f64) -> Result<[f64; 4]> {
        let (s, ds) = self.scale(t)?;
        let [f, fx, fy, ft] = self.eval(s * u, y, t);
        Ok([f, s * fx, fy, ft + ds * u * fx])
    }
}

/// A deformed critical arc `x = γ_t(|y|)` on one half-branch.
#[derive(Clone, Debug)]
pub struct FlowArc {
    pub branch: Branch,
    terms: Vec<(f64, Vec<f64>)>,
}

impl FlowArc {
    pub fn new(branch: Branch, arc: &PuiseuxSeries<TSeries>) -> FlowArc {
        FlowArc { branch, terms: arc.terms().map(|(e, c)| (to_f64(e), tcoeffs(c))).collect() }
    }

    /// `(γ, ∂γ/∂Y, ∂γ/∂t)` at `Y = |y| > 0`.
    pub fn eval(&self, y: f64, t: f64) -> (f64, f64, f64) {
        let mut out = (0.0, 0.0, 0.0);
        for (e, c) in &self.terms {
            let a = horner(c, t);
            let ye = y.powf(*e);
            out.0 += a * ye;
            out.1 += a * e * y.powf(e - 1.0);
            out.2 += dhorner(c, t) * ye;
        }
        out
    }
}

/// The glued field `v = Σ p_i v_i` in the rescaled coordinates `(u, y, t)`.
#[derive(Clone, Debug)]
pub struct GluedField {
    pub level: LevelFunction,
    pub pos: Vec<FlowArc>,
    pub neg: Vec<FlowArc>,
}

impl GluedField {
    pub fn new(level: LevelFunction, arcs: Vec<FlowArc>) -> GluedField {
        let (pos, neg) = arcs.into_iter().partition(|a| a.branch == Branch::Pos);
        GluedField { level, pos, neg }
    }

    /// `(du, dy, dt)` per unit of the flow parameter; exactly `(0, 0, -1)` on
    /// the x-axis.
    pub fn field(&self, u: f64, y: f64, t: f64) -> Result<[f64; 3]> {
        if y == 0.0 {
            return Ok([0.0, 0.0, -1.0]);
        }
        let (arcs, sign) = if y > 0.0 { (&self.pos, 1.0) } else { (&self.neg, -1.0) };
        let yy = y.abs();
        let [_, gu, gy, gt] = self.level.normalized(u, y, t)?;
        // partials in the half-branch coordinate Y = |y|
        let gy = sign * gy;
        let (s, ds) = self.level.scale(t)?;
        let zero = FlowArc { branch: Branch::Pos, terms: vec![] };
        let used: Vec<&FlowArc> = if arcs.is_empty() { vec![&zero] } else { arcs.iter().collect() };
        let shifted: Vec<(f64, f64, f64)> = used
            .iter()
            .map(|a| {
                let (g, gy_, gt_) = a.eval(yy, t);
                (g / s, gy_ / s, gt_ / s - g * ds / (s * s))
            })
            .collect();
        let alphas: Vec<f64> = shifted.iter().map(|a| a.0).collect();
        let p = partition_of_unity(&u, &alphas)?;
        let mut v = [0.0, 0.0, -1.0];
        for (pi, (g, g_y, g_t)) in p.iter().zip(&shifted) {
            if *pi == 0.0 {
                continue;
            }
            let x = u - g;
            let fy = gu * g_y + gy;
            let ft = gu * g_t + gt;
            let [dx, dyy, _] = field_v(x, yy, gu, fy, ft)?;
            v[0] += pi * (dx + g_y * dyy - g_t);
            v[1] += pi * sign * dyy;
        }
        Ok(v)
    }

    /// `v · ∇G`, which vanishes for a level-preserving field.
    pub fn tangency_residual(&self, u: f64, y: f64, t: f64) -> Result<f64> {
        let v = self.field(u, y, t)?;
        let [_, gu, gy, gt] = self.level.normalized(u, y, t)?;
        Ok(v[0] * gu + v[1] * gy + v[2] * gt)
    }
}
