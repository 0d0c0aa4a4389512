//! The exact engine: Tschirnhausen transforms over truncated t-series.
//!
//! Writing `F(X + λ(Y), Y; t) = G_0(X, Y) + P(X, Y; t)` with `P` divisible by
//! `t`, the t=0 polygon of `G_0` stays fixed while the dots of `P` below it are
//! cleared vertex by vertex. At a vertex `(m_r, q_r)` the root `ρ_t` of
//! `∂^{m_r-1}/∂X^{m_r-1} [a X^{m_r} Y^{q_r} + P] = 0` is found by a chord
//! iteration that gains one power of `t` per step, and `X` is shifted by it.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{BivarPoly, Coeff, PuiseuxSeries, TSeries};
use crate::algebra::FamilyPoly;
use crate::arcs::Branch;
use crate::error::{Error, Result};
use crate::polygon::{Dot, EdgeLine, Polygon};
use crate::rat::{factorial, fmt_rat, Rat};

/// A t-dependent dot that stays below the t=0 polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub dot: Dot,
    pub coeff: TSeries,
    /// The edge line the dot lies below; `None` when it lies left of the
    /// vertical edge.
    pub line: Option<EdgeLine>,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": "dot_below_polygon",
            "dot": [self.dot.0, fmt_rat(&self.dot.1)],
            "coeff": self.coeff.render(),
            "line": self.line.as_ref().map(|l| json!({
                "anchor": [l.anchor.0, fmt_rat(&l.anchor.1)],
                "tan": fmt_rat(&l.tan),
                "intercept": fmt_rat(&l.intercept),
            })),
        })
    }
}

#[derive(Clone, Debug)]
pub enum DeformOutcome {
    /// The polygon relative to the deformed arc is the t=0 polygon.
    Success { arc: PuiseuxSeries<TSeries>, polygon: Polygon },
    Failure { witness: Witness, arc: PuiseuxSeries<TSeries>, polygon: Polygon },
    /// Some dot below the polygon vanishes modulo `t^K` but is not known to
    /// vanish.
    Undecided { dot: Dot, order: usize },
}

impl DeformOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, DeformOutcome::Success { .. })
    }
}

/// Renders an arc over Q[t].
pub fn render_arc(arc: &PuiseuxSeries<TSeries>) -> String {
    if arc.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = arc
        .terms()
        .map(|(e, c)| {
            let ys = if e.is_one() { "y".to_string() } else { format!("y^{}", fmt_rat(e)) };
            let cs = c.render();
            if cs.contains(' ') {
                format!("({cs})*{ys}")
            } else {
                format!("{cs}*{ys}")
            }
        })
        .collect();
    parts.join(" + ")
}

fn polygon_at_zero(g: &BivarPoly<TSeries>) -> Result<Polygon> {
    let dots: Vec<Dot> = g.terms().filter(|(_, c)| !c.at_zero().is_zero()).map(|(d, _)| d.clone()).collect();
    Polygon::from_dots(&dots)
}

fn line_below(p: &Polygon, d: &Dot) -> Option<EdgeLine> {
    if d.0 < p.last_vertex().0 {
        return None;
    }
    for (k, e) in p.edges.iter().enumerate() {
        let (a, b) = (&p.vertices[k], &p.vertices[k + 1]);
        if d.0 <= a.0 && d.0 >= b.0 {
            return Some(EdgeLine::through(a.clone(), e.tan.clone()));
        }
    }
    None
}

/// Dots below `p` whose coefficient is not known to vanish, split into
/// certainly nonzero ones and ones vanishing only modulo `t^K`.
fn dots_below_polygon(g: &BivarPoly<TSeries>, p: &Polygon) -> (Vec<(Dot, TSeries)>, Vec<(Dot, TSeries)>) {
    let mut sure = Vec::new();
    let mut unsure = Vec::new();
    for (d, c) in g.terms() {
        if c.is_structural_zero() || !p.is_below(d) {
            continue;
        }
        match c.zero_test() {
            Ok(false) => sure.push((d.clone(), c.clone())),
            Ok(true) => {}
            Err(_) => unsure.push((d.clone(), c.clone())),
        }
    }
    (sure, unsure)
}

fn same_series(a: &PuiseuxSeries<TSeries>, b: &PuiseuxSeries<TSeries>) -> bool {
    a.len() == b.len() && a.terms().zip(b.terms()).all(|((e1, c1), (e2, c2))| e1 == e2 && c1.coeffs() == c2.coeffs())
}

/// One Tschirnhausen step at the vertex `(m, q)` of the t=0 polygon. Returns
/// the shifted polynomial and `ρ_t`; exponents of `ρ_t` at or above `cap`
/// cannot move a dot below the polygon and are dropped. `None` when the
/// derivative equation has no arc solution.
pub fn tschirnhausen_step(g: &BivarPoly<TSeries>, vertex: &Dot, cap: &Rat) -> Result<Option<(BivarPoly<TSeries>, PuiseuxSeries<TSeries>)>> {
    let (m, q) = (vertex.0, vertex.1.clone());
    if m == 0 {
        return Ok(None);
    }
    let k = g.terms().next().map(|(_, c)| c.order()).unwrap_or(1);
    let a = g.get(m, &q).cloned().ok_or(Error::Precondition("vertex without a coefficient".into()))?;
    if a.at_zero().is_zero() {
        return Err(Error::NonInvertible);
    }
    // a X^m Y^q + P
    let mut h = g.map(TSeries::t_part);
    h.set_term(m, q.clone(), a.clone());
    let mut d = h.clone();
    for _ in 0..m - 1 {
        d = d.derivative_x();
    }
    let lin = a.mul_rat(&Rat::from_integer(factorial(m as usize)));
    let lin_inv = lin.inv()?;
    let deg = d.x_degree().unwrap_or(0);
    let cols: Vec<PuiseuxSeries<TSeries>> = (0..=deg).map(|i| d.column(i)).collect();
    let ycap = &q + cap;
    let mut rho: PuiseuxSeries<TSeries> = PuiseuxSeries::zero();
    let mut converged = false;
    for _ in 0..(4 * k + 64) {
        let mut val: PuiseuxSeries<TSeries> = PuiseuxSeries::zero();
        let mut xp = PuiseuxSeries::monomial(Rat::zero(), TSeries::constant(&Rat::one(), k));
        for (i, col) in cols.iter().enumerate() {
            if i > 0 {
                xp = xp.mul_capped(&rho, &ycap);
            }
            if !col.is_empty() {
                val = val.add(&col.mul_capped(&xp, &ycap));
            }
        }
        let corr = val.with_trunc(None).shift(&-q.clone()).scale(&lin_inv);
        let next = rho.sub(&corr).truncate(cap).with_trunc(None);
        if next.terms().any(|(e, c)| e < &Rat::one() && !c.is_structural_zero()) {
            return Ok(None);
        }
        if same_series(&next, &rho) {
            converged = true;
            break;
        }
        rho = next;
    }
    if !converged {
        return Err(Error::TruncatedZero { order: k });
    }
    let rho = PuiseuxSeries::from_terms(rho.terms().filter(|(_, c)| !c.is_structural_zero()).map(|(e, c)| (e.clone(), c.clone())), None);
    if rho.is_empty() {
        return Ok(Some((g.clone(), rho)));
    }
    let shifted = g.substitute_arc(&rho, None, &k)?;
    Ok(Some((shifted, rho)))
}

/// Deforms the arc `λ` of `f_0` so that the polygon of `f_t` relative to it
/// stays the t=0 polygon, or reports the dot that cannot be cleared.
pub fn deform_arc(family: &FamilyPoly, lambda: &PuiseuxSeries<Rat>) -> Result<DeformOutcome> {
    let k = family.param_order();
    let lam: PuiseuxSeries<TSeries> = lambda.map(|c| TSeries::constant(c, k));
    let mut g = family.deform().substitute_arc(&lam, None, &k)?;
    let p0 = polygon_at_zero(&g)?;
    let cap = match p0.edges.last() {
        Some(e) => e.tan.clone(),
        None => g.max_y().unwrap_or_else(Rat::zero) + Rat::one(),
    };
    let mut arc = lam;
    for v in p0.vertices.clone() {
        let (sure, unsure) = dots_below_polygon(&g, &p0);
        if sure.is_empty() && unsure.is_empty() {
            break;
        }
        match tschirnhausen_step(&g, &v, &cap) {
            Ok(Some((g2, rho))) => {
                g = g2;
                arc = arc.add(&rho);
            }
            Ok(None) => break,
            Err(Error::TruncatedZero { .. }) => {
                let dot = unsure.first().or(sure.first()).map(|(d, _)| d.clone()).unwrap_or(v.clone());
                return Ok(DeformOutcome::Undecided { dot, order: k });
            }
            Err(e) => return Err(e),
        }
    }
    let (sure, unsure) = dots_below_polygon(&g, &p0);
    if let Some((dot, coeff)) = sure
        .iter()
        .min_by(|(d1, c1), (d2, c2)| {
            c1.t_valuation().cmp(&c2.t_valuation()).then(d2.0.cmp(&d1.0)).then(d1.1.cmp(&d2.1))
        })
        .cloned()
    {
        let line = line_below(&p0, &dot);
        return Ok(DeformOutcome::Failure { witness: Witness { dot, coeff, line }, arc, polygon: p0 });
    }
    if let Some((dot, _)) = unsure.first() {
        return Ok(DeformOutcome::Undecided { dot: dot.clone(), order: k });
    }
    Ok(DeformOutcome::Success { arc, polygon: p0 })
}

/// `deform_arc` for an arc on a half-branch, given in the coordinates of
/// that half-branch (`y ↦ -y` on the negative one).
pub fn deform_on_branch(family: &FamilyPoly, branch: Branch, lambda: &PuiseuxSeries<Rat>) -> Result<DeformOutcome> {
    match branch {
        Branch::Pos => deform_arc(family, lambda),
        Branch::Neg => deform_arc(&family.negate_y()?, lambda),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_expression, Parsed};
    use crate::rat::{int, rat};

    fn family(s: &str, k: usize) -> FamilyPoly {
        match parse_expression(s, k).unwrap() {
            Parsed::Family(f) => f,
            Parsed::Poly(p) => FamilyPoly::constant(&p, k).unwrap(),
        }
    }

    fn coeffs(c: &TSeries) -> Vec<Rat> {
        c.coeffs().to_vec()
    }

    #[test]
    fn cube_family_deforms_along_minus_t_y() {
        let f = family("x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4", 4);
        match deform_arc(&f, &PuiseuxSeries::zero()).unwrap() {
            DeformOutcome::Success { arc, polygon } => {
                assert_eq!(arc.len(), 1);
                assert_eq!(coeffs(arc.coeff(&int(1)).unwrap()), vec![int(0), int(-1)]);
                assert!(arc.coeff(&int(1)).unwrap().is_exact());
                assert_eq!(polygon.vertices, vec![(3, int(0)), (0, int(4))]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uncleanable_dot_is_reported() {
        let f = family("x^3+3*t*x^2*y+t^3*y^3-y^4", 4);
        match deform_arc(&f, &PuiseuxSeries::zero()).unwrap() {
            DeformOutcome::Failure { witness, .. } => {
                assert_eq!(witness.dot, (1, int(2)));
                assert_eq!(coeffs(&witness.coeff), vec![int(0), int(0), int(-3)]);
                let line = witness.line.unwrap();
                assert_eq!(line.tan, rat(4, 3));
                assert_eq!(line.intercept, int(4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn first_order_is_not_enough() {
        let f = family("x^3+3*t*x^2*y+t^3*y^3-y^4", 1);
        assert!(matches!(deform_arc(&f, &PuiseuxSeries::zero()).unwrap(), DeformOutcome::Undecided { .. }));
    }

    #[test]
    fn step_on_the_transformed_cube() {
        let f = family("x^3+3*t*x^2*y+t^3*y^3-y^4", 4);
        let (g, rho) = tschirnhausen_step(&f.deform(), &(3, int(0)), &rat(4, 3)).unwrap().unwrap();
        assert_eq!(coeffs(rho.coeff(&int(1)).unwrap()), vec![int(0), int(-1)]);
        let want = family("x^3-3*t^2*x*y^2+3*t^3*y^3-y^4", 4).deform();
        assert_eq!(g.dots(), want.dots());
        for (d, c) in want.terms() {
            assert_eq!(coeffs(g.get(d.0, &d.1).unwrap()), coeffs(c));
        }
    }

    #[test]
    fn critical_arc_of_the_quadratic_family() {
        let f = family("x^2+2*x*y-t*y^2", 4);
        let lam = PuiseuxSeries::monomial(int(1), int(-1));
        match deform_arc(&f, &lam).unwrap() {
            DeformOutcome::Success { arc, polygon } => {
                assert_eq!(coeffs(arc.coeff(&int(1)).unwrap()), vec![int(-1)]);
                assert_eq!(polygon.vertices, vec![(2, int(0)), (0, int(2))]);
            }
            other => panic!("{other:?}"),
        }
        let (_, rho) = tschirnhausen_step(&f.deform().substitute_arc(&lam.map(|c| TSeries::constant(c, 4)), None, &4).unwrap(), &(2, int(0)), &int(1)).unwrap().unwrap();
        assert!(rho.is_empty());
    }

    #[test]
    fn lower_half_branch_uses_the_mirrored_family() {
        let f = family("x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4", 4);
        match deform_on_branch(&f, Branch::Neg, &PuiseuxSeries::zero()).unwrap() {
            DeformOutcome::Success { arc, .. } => assert_eq!(coeffs(arc.coeff(&int(1)).unwrap()), vec![int(0), int(1)]),
            other => panic!("{other:?}"),
        }
    }
}
