//! The Newton-Puiseux expansion tree.
//!
//! The polynomial `f` is expanded together with its square-free part `r`:
//! clusters of distinct roots are read off `r`, multiplicities off `f`. Every
//! node of the tree is a finite prefix `λ` shared by a cluster of roots; its
//! edges of slope above the last prefix exponent are the places where the
//! cluster splits. Single roots are finished by a chord iteration whose
//! accuracy is tracked exponent by exponent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::isolate::{roots_exact, roots_simple, IsoRoot};
use crate::algebra::ball::fresh_tag;
use crate::algebra::sqfree::squarefree_part;
use crate::algebra::{contact_order, BivarPoly, Coeff, Order, PuiseuxSeries, QPoly, Scalar};
use crate::error::{Error, Result};
use crate::polygon::{polygon_of, EdgeLine};
use crate::rat::{fmt_rat, Rat};

/// Limits for one expansion.
#[derive(Clone, Debug)]
pub struct ExpandConfig {
    pub prec: u32,
    pub max_prec: u32,
    pub denom_cap: u64,
    pub max_terms: usize,
    /// Expand every root at least to this exponent. `None` picks one past the
    /// largest splitting exponent.
    pub depth: Option<Rat>,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        ExpandConfig {
            prec: crate::DEFAULT_PRECISION,
            max_prec: crate::MAX_PRECISION,
            denom_cap: crate::DEFAULT_DENOM_CAP,
            max_terms: crate::DEFAULT_MAX_TERMS,
            depth: None,
        }
    }
}

/// One root `x = λ(y)` of `f`, for `y > 0`.
#[derive(Clone, Debug)]
pub struct Root {
    pub series: PuiseuxSeries<Scalar>,
    pub mult: usize,
    pub real: bool,
}

impl Root {
    pub fn is_exact(&self) -> bool {
        self.series.terms().all(|(_, c)| c.is_exact())
    }
}

/// A nonzero root `ζ` of an edge polynomial.
#[derive(Clone, Debug)]
pub struct EdgeRoot {
    pub zeta: Scalar,
    /// Multiplicity in the edge polynomial of `f`.
    pub mult: usize,
    /// Number of distinct roots of `f` continuing `λ + ζ y^h`.
    pub cluster: usize,
    pub real: bool,
}

/// An edge of the polygon of `f` relative to a node prefix.
#[derive(Clone, Debug)]
pub struct NodeEdge {
    pub tan: Rat,
    /// The intercept `q + i * tan` of the edge line.
    pub intercept: Rat,
    /// x-degree of the left endpoint.
    pub top: u32,
    /// x-degree of the right endpoint.
    pub bottom: u32,
    /// Coefficients of the edge polynomial `Σ a_{i,q} u^i`, constant first.
    pub initial: Vec<Scalar>,
    pub roots: Vec<EdgeRoot>,
}

/// A node of the tree: a prefix shared by at least two distinct roots (or
/// the root node, with empty prefix).
#[derive(Clone, Debug)]
pub struct Node {
    pub prefix: PuiseuxSeries<Scalar>,
    pub real: bool,
    /// Exponents of the node's edges must exceed this.
    pub floor: Rat,
    pub edges: Vec<NodeEdge>,
}

/// All roots of `f` on one half-plane together with the tree they came from.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub roots: Vec<Root>,
    pub nodes: Vec<Node>,
    pub depth: Rat,
    pub prec: u32,
}

impl Expansion {
    /// Largest contact order between two distinct roots.
    pub fn max_split(&self) -> Option<Rat> {
        self.nodes.iter().flat_map(|n| n.edges.iter()).filter(|e| e.roots.iter().map(|r| r.cluster).sum::<usize>() > 1 || e.roots.len() > 1).map(|e| e.tan.clone()).max()
    }

    /// Every pair of distinct roots differs at an exponent below the depth.
    pub fn separated(&self) -> Result<bool> {
        for (k, a) in self.roots.iter().enumerate() {
            for b in &self.roots[k + 1..] {
                match contact_order(&a.series, &b.series)? {
                    Order::Finite(c) if c < self.depth => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }
}

/// Newton-Puiseux roots of `f` for `y > 0`, retrying at higher precision when
/// a zero test is undecidable.
pub fn puiseux_roots(f: &BivarPoly<Rat>, cfg: &ExpandConfig) -> Result<Expansion> {
    let mut prec = cfg.prec.max(64);
    loop {
        match expand_at(f, cfg, prec) {
            Err(e) if e.wants_precision() && prec < cfg.max_prec => prec = (prec * 2).min(cfg.max_prec),
            other => return other,
        }
    }
}

/// Roots for `y < 0`, expressed in `|y|`.
pub fn puiseux_roots_neg(f: &BivarPoly<Rat>, cfg: &ExpandConfig) -> Result<Expansion> {
    puiseux_roots(&f.negate_y()?, cfg)
}

fn to_scalar(f: &BivarPoly<Rat>) -> BivarPoly<Scalar> {
    f.map(|c| Scalar::Exact(c.clone()))
}

struct Ctx<'a> {
    cfg: &'a ExpandConfig,
    prec: u32,
    target: Rat,
    out: Expansion,
}

fn expand_at(f: &BivarPoly<Rat>, cfg: &ExpandConfig, prec: u32) -> Result<Expansion> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.x_degree().unwrap_or(0) == 0 {
        return Err(Error::Precondition("polynomial does not involve x".into()));
    }
    let r = squarefree_part(f)?;
    let big = to_scalar(f);
    let red = to_scalar(&r);
    // a first pass fixes the splitting exponents, which set the default depth
    let target = match &cfg.depth {
        Some(d) => d.clone(),
        None => {
            let mut probe = Ctx {
                cfg,
                prec,
                target: Rat::zero(),
                out: Expansion { roots: vec![], nodes: vec![], depth: Rat::zero(), prec },
            };
            expand_node(&mut probe, &big, &red, PuiseuxSeries::zero(), true, Rat::zero(), 0, false)?;
            probe.out.max_split().unwrap_or_else(Rat::one) + Rat::one()
        }
    };
    let mut cx = Ctx {
        cfg,
        prec,
        target: target.clone(),
        out: Expansion { roots: vec![], nodes: vec![], depth: target, prec },
    };
    expand_node(&mut cx, &big, &red, PuiseuxSeries::zero(), true, Rat::zero(), 0, true)?;
    Ok(cx.out)
}

fn edge_coeffs(g: &BivarPoly<Scalar>, line: &EdgeLine, lo: u32, hi: u32) -> Vec<Scalar> {
    (0..=hi)
        .map(|i| {
            if i < lo {
                return Scalar::Exact(Rat::zero());
            }
            let q = &line.intercept - Rat::from_integer(i.into()) * &line.tan;
            g.get(i, &q).cloned().unwrap_or(Scalar::Exact(Rat::zero()))
        })
        .collect()
}

fn is_exact_poly(c: &[Scalar]) -> Option<QPoly> {
    c.iter().map(|s| s.as_rat().cloned()).collect::<Option<Vec<_>>>().map(QPoly::new)
}

/// Horner evaluation of the `j`-th derivative.
fn derivative_at(c: &[Scalar], j: usize, z: &Scalar) -> Scalar {
    let mut acc = Scalar::Exact(Rat::zero());
    for k in (j..c.len()).rev() {
        let fall: BigInt = ((k - j + 1)..=k).map(BigInt::from).product();
        acc = acc.mul(z).add(&c[k].mul_rat(&Rat::from_integer(fall)));
    }
    acc
}

/// Multiplicity of `ζ` as a root of the polynomial with coefficients `c`:
/// the first derivative certainly nonzero there.
fn multiplicity_at(c: &[Scalar], z: &Scalar) -> Result<usize> {
    for j in 1..c.len() {
        match derivative_at(c, j, z).zero_test() {
            Ok(false) => return Ok(j),
            Ok(true) => {}
            Err(_) => {}
        }
    }
    Err(Error::UndecidableZero { prec: z.ctx() })
}

fn edge_roots(r_coeffs: &[Scalar], f_coeffs: &[Scalar], lo_r: usize, lo_f: usize, real: bool, prec: u32) -> Result<Vec<EdgeRoot>> {
    let reduced_r = &r_coeffs[lo_r..];
    let reduced_f = &f_coeffs[lo_f..];
    let distinct: Vec<IsoRoot> = match is_exact_poly(reduced_r) {
        Some(p) => roots_exact(&p, prec)?,
        None => roots_simple(reduced_r, prec, real)?,
    };
    let total = reduced_f.len() - 1;
    let mut out = Vec::with_capacity(distinct.len());
    let mut sum = 0;
    for d in distinct {
        let mult = match (is_exact_poly(reduced_f), &d.z) {
            (Some(p), Scalar::Exact(z)) => {
                let mut k = 0;
                let mut q = p;
                while q.eval(z).is_zero() {
                    k += 1;
                    q = q.derivative();
                }
                k
            }
            _ => multiplicity_at(reduced_f, &d.z)?,
        };
        sum += mult;
        out.push(EdgeRoot { zeta: d.z, mult, cluster: d.mult, real: real && d.real });
    }
    if sum != total {
        return Err(Error::UndecidableZero { prec });
    }
    Ok(out)
}

/// Substitutes `X -> X + ζ y^h` and clears the dots of the old edge line that
/// are known to vanish: those of x-degree below `keep`.
fn descend(g: &BivarPoly<Scalar>, zeta: &Scalar, h: &Rat, line: &EdgeLine, keep: usize, prec: u32) -> Result<BivarPoly<Scalar>> {
    let mono = PuiseuxSeries::monomial(h.clone(), zeta.clone());
    let mut out = g.substitute_arc(&mono, None, &prec)?;
    for i in 0..keep as u32 {
        let q = &line.intercept - Rat::from_integer(i.into()) * &line.tan;
        out.remove_term(i, &q);
    }
    Ok(out)
}

fn check_denominator(e: &Rat, prefix_denom: &BigInt, cap: u64) -> Result<BigInt> {
    let d = prefix_denom.lcm(e.denom());
    if d > BigInt::from(cap) {
        return Err(Error::DenominatorCap { found: d.to_u64().unwrap_or(u64::MAX), cap });
    }
    Ok(d)
}

#[allow(clippy::too_many_arguments)]
fn expand_node(
    cx: &mut Ctx<'_>,
    big: &BivarPoly<Scalar>,
    red: &BivarPoly<Scalar>,
    prefix: PuiseuxSeries<Scalar>,
    real: bool,
    floor: Rat,
    level: usize,
    finish_leaves: bool,
) -> Result<()> {
    if level > cx.cfg.max_terms {
        return Err(Error::DepthCap(cx.cfg.max_terms));
    }
    let pf = polygon_of(big)?;
    let pr = polygon_of(red)?;
    let mut node = Node { prefix: prefix.clone(), real, floor: floor.clone(), edges: vec![] };

    // the prefix itself is a root
    if pr.last_vertex().0 >= 1 {
        let m = pf.last_vertex().0 as usize;
        cx.out.roots.push(Root { series: prefix.clone().with_trunc(None), mult: m, real });
    }

    let prefix_denom = prefix.denom();
    let mut children = Vec::new();
    for (k, er) in pr.edges.iter().enumerate() {
        if er.tan <= floor {
            continue;
        }
        let h = er.tan.clone();
        check_denominator(&h, &prefix_denom, cx.cfg.denom_cap)?;
        let kf = pf.edges.iter().position(|e| e.tan == h).ok_or(Error::UndecidableZero { prec: cx.prec })?;
        let line_r = pr.edge_line(k + 1)?;
        let line_f = pf.edge_line(kf + 1)?;
        let (top_r, bot_r) = (pr.vertices[k].0, pr.vertices[k + 1].0);
        let (top_f, bot_f) = (pf.vertices[kf].0, pf.vertices[kf + 1].0);
        let ir = edge_coeffs(red, &line_r, bot_r, top_r);
        let if_ = edge_coeffs(big, &line_f, bot_f, top_f);
        let roots = edge_roots(&ir, &if_, bot_r as usize, bot_f as usize, real, cx.prec)?;
        for z in &roots {
            children.push((h.clone(), line_f.clone(), line_r.clone(), z.clone()));
        }
        node.edges.push(NodeEdge {
            tan: h,
            intercept: line_f.intercept.clone(),
            top: top_f,
            bottom: bot_f,
            initial: if_,
            roots,
        });
    }
    cx.out.nodes.push(node);

    for (h, line_f, line_r, z) in children {
        let mut next = prefix.clone();
        next.add_term(h.clone(), z.zeta.clone());
        let child_real = real && z.real;
        if z.cluster >= 2 {
            let big2 = descend(big, &z.zeta, &h, &line_f, z.mult, cx.prec)?;
            let red2 = descend(red, &z.zeta, &h, &line_r, z.cluster, cx.prec)?;
            expand_node(cx, &big2, &red2, next, child_real, h, level + 1, finish_leaves)?;
        } else if finish_leaves {
            let g = descend(red, &z.zeta, &h, &line_r, 1, cx.prec)?;
            let tail = extend_leaf(&g, &h, &cx.target, cx.prec, cx.cfg.max_terms)?;
            let series = tag_balls(&next.add(&tail));
            series.check_denominators(cx.cfg.denom_cap)?;
            cx.out.roots.push(Root { series, mult: z.mult, real: child_real });
        } else {
            cx.out.roots.push(Root { series: next, mult: z.mult, real: child_real });
        }
    }
    Ok(())
}

/// Gives every ball coefficient its own identity so that a series compared
/// with a copy of itself cancels exactly.
fn tag_balls(s: &PuiseuxSeries<Scalar>) -> PuiseuxSeries<Scalar> {
    let trunc = s.trunc().cloned();
    PuiseuxSeries::from_terms(
        s.terms().map(|(e, c)| {
            let c = match c {
                Scalar::Ball(b) if b.tag.is_none() => Scalar::Ball(b.clone().with_tag(fresh_tag())),
                other => other.clone(),
            };
            (e.clone(), c)
        }),
        trunc,
    )
}

/// The root `X` of `G(X, y)` with order above `h`, where `G` has a certain
/// vertex at `(1, q1)` and nothing of x-degree 0 up to the relevant order.
/// Returns the tail with its truncation point (absent when exact).
pub(crate) fn extend_leaf(g: &BivarPoly<Scalar>, h: &Rat, target: &Rat, prec: u32, max_terms: usize) -> Result<PuiseuxSeries<Scalar>> {
    let q1 = g.column_order(1).ok_or(Error::Precondition("leaf without a linear term".into()))?;
    let a = g.get(1, &q1).expect("column order is a term").clone();
    let a_inv = a.inv()?;
    let denom = g.y_denom().lcm(h.denom());
    let step = Rat::new(BigInt::one(), denom);
    let e0 = h + &step;
    if &e0 >= target {
        return Ok(PuiseuxSeries::zero().with_trunc(Some(e0)));
    }
    let deg = g.x_degree().unwrap_or(1);
    let cols: Vec<PuiseuxSeries<Scalar>> = (0..=deg).map(|i| g.column(i)).collect();
    let mut delta: Option<Rat> = cols[1].terms().nth(1).map(|(e, _)| e - &q1);
    for (i, col) in cols.iter().enumerate().skip(2) {
        if let Some(o) = col.min_exponent() {
            let d = o + Rat::from_integer((i - 1).into()) * &e0 - &q1;
            delta = Some(delta.map_or(d.clone(), |x: Rat| x.min(d)));
        }
    }
    let cap = &q1 + target;
    let mut x: PuiseuxSeries<Scalar> = PuiseuxSeries::zero();
    let mut known = e0.clone();
    let step_gain = delta.unwrap_or_else(|| target - &e0);
    if step_gain <= Rat::zero() {
        return Err(Error::Precondition("leaf iteration does not contract".into()));
    }
    let max_iter = 4096;
    for _ in 0..max_iter {
        let mut res = PuiseuxSeries::zero();
        let mut xp = PuiseuxSeries::monomial(Rat::zero(), Scalar::Exact(Rat::one()));
        for (i, col) in cols.iter().enumerate() {
            if i > 0 {
                xp = xp.mul_capped(&x, &cap);
            }
            if !col.is_empty() {
                res = res.add(&col.mul_capped(&xp, &cap));
            }
        }
        let res = res.with_trunc(None);
        if res.terms().all(|(_, c)| c.is_structural_zero()) && x.terms().all(|(_, c)| c.is_exact()) {
            // the residual vanishes identically below the cap; with exact
            // data the remaining tail is checked by the full polynomial
            if residual_is_zero(g, &x, prec)? {
                return Ok(x.with_trunc(None));
            }
        }
        if &known >= target {
            break;
        }
        let corr = res.shift(&-q1.clone()).scale(&a_inv);
        x = x.sub(&corr).truncate(target);
        known = &known + &step_gain;
        if x.len() > max_terms {
            return Err(Error::DepthCap(max_terms));
        }
    }
    Ok(x.truncate(&known.min(target.clone())))
}

fn residual_is_zero(g: &BivarPoly<Scalar>, x: &PuiseuxSeries<Scalar>, prec: u32) -> Result<bool> {
    if x.terms().any(|(e, _)| e < &Rat::one()) {
        return Ok(false);
    }
    let mut x_exact = x.clone().with_trunc(None);
    if x_exact.is_empty() {
        x_exact = PuiseuxSeries::zero();
    }
    let sub = g.substitute_arc(&x_exact, None, &prec)?;
    let zero = sub.terms().all(|((i, _), c)| *i > 0 || c.is_structural_zero());
    Ok(zero)
}

/// One line per root: exponents with the real and imaginary midpoints and the
/// radius of each coefficient.
pub fn render_root(r: &Root) -> String {
    let terms: Vec<String> = r
        .series
        .terms()
        .map(|(e, c)| {
            let (re, im, rad) = c.parts();
            if c.is_exact() {
                format!("{}:{}", fmt_rat(e), fmt_rat(&re))
            } else {
                format!("{}:{:.6e}{:+.6e}i±{:.1e}", fmt_rat(e), crate::rat::to_f64(&re), crate::rat::to_f64(&im), crate::rat::to_f64(&rad))
            }
        })
        .collect();
    format!("[{}] mult {}", terms.join(", "), r.mult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_bivar;
    use crate::rat::{int, rat};

    fn roots(s: &str) -> Expansion {
        puiseux_roots(&parse_bivar(s).unwrap(), &ExpandConfig::default()).unwrap()
    }

    #[test]
    fn cusp_has_two_conjugate_roots() {
        let e = roots("x^2 - y^3");
        assert_eq!(e.roots.len(), 2);
        assert!(e.roots.iter().all(|r| r.real && r.is_exact()));
        let c: Vec<Rat> = e.roots.iter().map(|r| r.series.coeff(&rat(3, 2)).unwrap().as_rat().unwrap().clone()).collect();
        assert_eq!(c, vec![int(-1), int(1)]);
    }

    #[test]
    fn multiple_root_is_kept_once() {
        let e = roots("(x - y^2)^3 * (x + y)");
        assert_eq!(e.roots.len(), 2);
        let m: Vec<usize> = e.roots.iter().map(|r| r.mult).collect();
        assert_eq!(m.iter().sum::<usize>(), 4);
        assert!(m.contains(&3));
    }

    #[test]
    fn irrational_leaf_is_a_ball() {
        let e = roots("x^2 - 2*y^2");
        assert_eq!(e.roots.len(), 2);
        assert!(e.roots.iter().all(|r| r.real && !r.is_exact()));
        assert!(e.separated().unwrap());
    }

    #[test]
    fn second_level_split() {
        // roots y + y^2 and y - y^2, plus -y
        let e = roots("(x - y - y^2) * (x - y + y^2) * (x + y)");
        assert_eq!(e.roots.len(), 3);
        assert_eq!(e.max_split(), Some(int(2)));
        assert!(e.nodes.len() >= 2);
        assert!(e.separated().unwrap());
    }

    #[test]
    fn leaf_tail_follows_the_curve() {
        // x = y + y^2 + y^3 + ... for x(1 - x)... use x - y - x^2 with root
        // (1 - sqrt(1 - 4y)) / 2 = y + y^2 + 2y^3 + 5y^4 + ...
        let cfg = ExpandConfig { depth: Some(int(5)), ..Default::default() };
        let e = puiseux_roots(&parse_bivar("x - y - x^2").unwrap(), &cfg).unwrap();
        assert_eq!(e.roots.len(), 1);
        let s = &e.roots[0].series;
        let c: Vec<Rat> = (1..=4).map(|k| s.coeff(&int(k)).unwrap().as_rat().unwrap().clone()).collect();
        assert_eq!(c, vec![int(1), int(1), int(2), int(5)]);
    }

    #[test]
    fn negative_branch() {
        let f = parse_bivar("x^2 - y^3").unwrap();
        let e = puiseux_roots_neg(&f, &ExpandConfig::default()).unwrap();
        assert!(e.roots.iter().all(|r| !r.real));
    }
}
